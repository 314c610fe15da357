// Minimal pub/sub store; holds the latest server responses plus transient
// UI state. Server data here is a cache of the last fetch, never a source
// of truth — a reload rebuilds everything from the server.

export type Listener = () => void;

export function createStore<T extends object>(initial: T) {
  let state = initial;
  const listeners = new Set<Listener>();
  return {
    get(): T {
      return state;
    },
    set(partial: Partial<T>): void {
      state = { ...state, ...partial };
      listeners.forEach((fn) => fn());
    },
    subscribe(fn: Listener): () => void {
      listeners.add(fn);
      return () => listeners.delete(fn);
    },
  };
}
