// Number rendering that matches the server's report formatting: one
// decimal, half-up, applied to the shortest decimal form of the value.
// The values themselves always come from server responses.

export function halfUpOneDecimal(value: number): string {
  const text = value.toString();
  if (text.includes('e') || text.includes('E')) {
    return value.toFixed(1); // not reachable for 1..5 scores
  }
  const [intPart, fracPart = ''] = text.split('.');
  let whole = parseInt(intPart, 10);
  let tenth = fracPart ? parseInt(fracPart.charAt(0), 10) : 0;
  const rest = fracPart.slice(1);
  if (rest && rest.charAt(0) >= '5') {
    tenth += 1;
    if (tenth === 10) {
      tenth = 0;
      whole += 1;
    }
  }
  return `${whole}.${tenth}`;
}

export function fmtWeight(value: number): string {
  const rounded = Math.round(value * 100) / 100;
  return String(rounded);
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}
