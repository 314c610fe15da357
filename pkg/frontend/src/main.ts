// Entry point: pick the role from the URL, pull server state, render, poll.
//
//   ?session=<id>&assessor=<id>   -> survey (one route per team member)
//   ?session=<id>&facilitator=1   -> consensus board / dashboard
//   ?session=<id>                 -> read-only board
//
// The server stays the single source of truth: a hard reload rebuilds the
// exact same view from server responses alone.

import { ApiClient, ApiError } from './api';
import { createStore } from './store';
import { ChartView, ModelView, ScoresView, SessionView, WeightMapping } from './types';
import { BoardState, effectiveWeights, renderBoardView } from './views/board';
import { renderDashboard } from './views/dashboard';
import {
  SurveyState,
  canSubmit,
  currentAnswer,
  renderSurveyView,
  surveySteps,
  validateSelection,
} from './views/survey';

const POLL_INTERVAL_MS = 2000;
const WHAT_IF_DEBOUNCE_MS = 250;

interface Route {
  sessionId: string | null;
  assessorId: string | null;
  facilitator: boolean;
}

export function parseRoute(search: string): Route {
  const params = new URLSearchParams(search);
  return {
    sessionId: params.get('session'),
    assessorId: params.get('assessor'),
    facilitator: params.get('facilitator') === '1',
  };
}

interface AppState {
  model: ModelView | null;
  session: SessionView | null;
  serverScores: ScoresView | null;
  chart: ChartView | null;
  draftWeights: WeightMapping | null;
  whatIfPending: boolean;
  stepIndex: number;
  selection: number | null;
  comment: string;
  error: string | null;
  notice: string | null;
}

function boot() {
  const mount = document.getElementById('app');
  if (!mount) return;
  const root: HTMLElement = mount;
  const route = parseRoute(window.location.search);
  if (!route.sessionId) {
    root.innerHTML =
      '<p class="error">Open with ?session=&lt;id&gt; plus &assessor=&lt;id&gt; ' +
      'for the survey or &facilitator=1 for the consensus board.</p>';
    return;
  }

  const api = new ApiClient('', route.assessorId);
  const store = createStore<AppState>({
    model: null,
    session: null,
    serverScores: null,
    chart: null,
    draftWeights: null,
    whatIfPending: false,
    stepIndex: 0,
    selection: null,
    comment: '',
    error: null,
    notice: null,
  });

  let whatIfTimer: ReturnType<typeof setTimeout> | null = null;
  let whatIfGeneration = 0;

  async function refreshScores(session: SessionView, draft: WeightMapping | null) {
    // The preview always displays the server's answer, never a local one.
    const generation = ++whatIfGeneration;
    try {
      const scores = await api.whatIf(session.id, draft ?? undefined);
      if (generation === whatIfGeneration) {
        store.set({ serverScores: scores, whatIfPending: false });
      }
    } catch (err) {
      if (generation === whatIfGeneration) {
        // Not scorable yet (missing answers) — show "pending" cells.
        store.set({ serverScores: null, whatIfPending: false });
      }
    }
  }

  async function refresh() {
    const sessionId = route.sessionId as string;
    try {
      const session = await api.getSession(sessionId);
      let model = store.get().model;
      if (!model || model.id !== session.model_id) {
        model = await api.getModel(session.model_id, session.model_version);
      }
      let chart = store.get().chart;
      if (session.phase === 'finalized' || session.phase === 'reported') {
        chart = await api.getChart(sessionId);
      }
      store.set({ session, model, chart, error: null });
      if (route.facilitator || !route.assessorId) {
        void refreshScores(session, store.get().draftWeights);
      }
    } catch (err) {
      store.set({ error: err instanceof Error ? err.message : String(err) });
    }
  }

  function scheduleWhatIf() {
    const state = store.get();
    if (!state.session) return;
    store.set({ whatIfPending: true });
    if (whatIfTimer) clearTimeout(whatIfTimer);
    whatIfTimer = setTimeout(() => {
      void refreshScores(state.session as SessionView, store.get().draftWeights);
    }, WHAT_IF_DEBOUNCE_MS);
  }

  async function submitCurrent() {
    const state = store.get();
    if (!state.model || !state.session) return;
    const problem = validateSelection(state.selection);
    if (problem) {
      store.set({ error: problem, notice: null });
      return; // no request leaves the client
    }
    const step = surveySteps(state.model)[state.stepIndex];
    try {
      const session = await api.submitResponse(
        state.session.id,
        step.practice.id,
        state.selection as number,
        state.comment,
      );
      store.set({
        session,
        error: null,
        notice: `Saved level ${state.selection} for "${step.practice.name}".`,
      });
    } catch (err) {
      const message =
        err instanceof ApiError ? `${err.message} [${err.code}]` : String(err);
      store.set({ error: message, notice: null });
    }
  }

  async function finalize() {
    const state = store.get();
    if (!state.session) return;
    try {
      await api.transition(state.session.id, 'finalize');
      await refresh();
    } catch (err) {
      const message =
        err instanceof ApiError ? `${err.message} [${err.code}]` : String(err);
      store.set({ error: message });
    }
  }

  async function recordConsensus(practiceId: string) {
    const state = store.get();
    if (!state.session) return;
    const scoreText = window.prompt(
      `Agreed score for ${practiceId} (1-5, decimals allowed):`);
    if (scoreText === null || scoreText.trim() === '') return;
    const gapText = window.prompt('Gap note (optional):') ?? '';
    const actionText = window.prompt('Improvement action (optional):') ?? '';
    try {
      const session = await api.recordConsensus(
        state.session.id,
        practiceId,
        Number(scoreText),
        gapText.trim() ? [{ description: gapText.trim(), severity: 'medium' }] : [],
        actionText.trim() ? [actionText.trim()] : [],
      );
      store.set({ session, error: null });
      void refreshScores(session, store.get().draftWeights);
    } catch (err) {
      const message =
        err instanceof ApiError ? `${err.message} [${err.code}]` : String(err);
      store.set({ error: message });
    }
  }

  async function commitWeights() {
    const state = store.get();
    if (!state.session || !state.draftWeights) return;
    try {
      const session = await api.setWeights(state.session.id, state.draftWeights);
      store.set({ session, draftWeights: null, error: null });
      void refreshScores(session, null);
    } catch (err) {
      const message =
        err instanceof ApiError ? `${err.message} [${err.code}]` : String(err);
      store.set({ error: message });
    }
  }

  function render() {
    const state = store.get();
    if (state.error && !state.session) {
      root.innerHTML = `<p class="error">${state.error}</p>`;
      return;
    }
    if (!state.model || !state.session) {
      root.innerHTML = '<p>Loading…</p>';
      return;
    }

    if (route.assessorId && !route.facilitator) {
      const surveyState: SurveyState = {
        model: state.model,
        session: state.session,
        assessorId: route.assessorId,
        stepIndex: state.stepIndex,
        selection: state.selection,
        comment: state.comment,
        error: state.error,
        notice: state.notice,
      };
      root.innerHTML = renderSurveyView(surveyState);
      return;
    }

    if (
      (state.session.phase === 'finalized' || state.session.phase === 'reported') &&
      state.chart
    ) {
      root.innerHTML = renderDashboard(
        state.chart,
        api.reportUrl(state.session.id, 'markdown'),
        api.reportUrl(state.session.id, 'structured'),
      );
      return;
    }

    const boardState: BoardState = {
      model: state.model,
      session: state.session,
      serverScores: state.serverScores,
      draftWeights: state.draftWeights,
      whatIfPending: state.whatIfPending,
      readOnly: !route.facilitator,
      error: state.error,
    };
    root.innerHTML = renderBoardView(boardState);
  }

  root.addEventListener('click', (event) => {
    const target = event.target as HTMLElement;
    const action = target.getAttribute('data-action');
    if (!action) return;
    const state = store.get();
    if (action === 'prev') {
      store.set({ stepIndex: Math.max(0, state.stepIndex - 1),
                  selection: null, comment: '', error: null, notice: null });
    } else if (action === 'next') {
      const max = state.model ? surveySteps(state.model).length - 1 : 0;
      store.set({ stepIndex: Math.min(max, state.stepIndex + 1),
                  selection: null, comment: '', error: null, notice: null });
    } else if (action === 'submit') {
      void submitCurrent();
    } else if (action === 'finalize') {
      void finalize();
    } else if (action === 'commit-weights') {
      void commitWeights();
    } else if (action === 'edit-consensus') {
      const practiceId = target.getAttribute('data-practice');
      if (practiceId) void recordConsensus(practiceId);
    }
  });

  root.addEventListener('input', (event) => {
    const target = event.target as HTMLInputElement;
    const action = target.getAttribute('data-action');
    if (action === 'pick-level') {
      store.set({ selection: Number(target.value), error: null });
    } else if (action === 'comment') {
      // textarea keeps its own caret; store lazily
      store.get().comment = target.value;
    } else if (action === 'weight') {
      const criterionId = target.getAttribute('data-criterion') as string;
      const practiceId = target.getAttribute('data-practice') as string;
      const state = store.get();
      if (!state.session) return;
      const draft: WeightMapping = JSON.parse(
        JSON.stringify(effectiveWeights({
          model: state.model as ModelView,
          session: state.session,
          serverScores: state.serverScores,
          draftWeights: state.draftWeights,
          whatIfPending: false,
          readOnly: false,
          error: null,
        })),
      );
      draft[criterionId][practiceId] = Number(target.value);
      store.set({ draftWeights: draft });
      scheduleWhatIf();
    }
  });

  store.subscribe(render);
  void refresh();
  setInterval(() => void refresh(), POLL_INTERVAL_MS);
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  boot();
}
