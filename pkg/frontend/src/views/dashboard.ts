// Post-finalize dashboard: radar of criterion scores, the maturity band
// statement, and report downloads. All values come from the chart endpoint.

import { escapeHtml, halfUpOneDecimal } from '../format';
import { ChartView } from '../types';

export function bandStatement(band: ChartView['band']): string {
  const qualifier = band.qualifier === 'above' ? 'above' : 'at';
  return `${qualifier} level ${band.level} — ${band.label}`;
}

export function radarSvg(chart: ChartView): string {
  const size = 260;
  const center = size / 2;
  const radius = size / 2 - 30;
  const points = chart.points;
  const n = points.length;
  if (n === 0) return '';

  const angle = (i: number) => (Math.PI * 2 * i) / n - Math.PI / 2;
  const ringPath = (fraction: number) =>
    points
      .map((_, i) => {
        const r = radius * fraction;
        return `${center + r * Math.cos(angle(i))},${center + r * Math.sin(angle(i))}`;
      })
      .join(' ');

  const rings = [0.2, 0.4, 0.6, 0.8, 1.0]
    .map((f) => `<polygon points="${ringPath(f)}" class="radar-ring"></polygon>`)
    .join('');

  // Scores span 1..5; map to 0..radius.
  const valuePoints = points
    .map((p, i) => {
      const r = (radius * (p.value - 1)) / 4;
      return `${center + r * Math.cos(angle(i))},${center + r * Math.sin(angle(i))}`;
    })
    .join(' ');

  const labels = points
    .map((p, i) => {
      const r = radius + 16;
      const x = center + r * Math.cos(angle(i));
      const y = center + r * Math.sin(angle(i));
      return `<text x="${x}" y="${y}" text-anchor="middle" class="radar-label">
        ${escapeHtml(p.label)} (${halfUpOneDecimal(p.value)})</text>`;
    })
    .join('');

  return `
  <svg viewBox="-40 -20 ${size + 80} ${size + 40}" class="radar" role="img">
    ${rings}
    <polygon points="${valuePoints}" class="radar-value"></polygon>
    ${labels}
  </svg>`;
}

export function renderDashboard(
  chart: ChartView,
  markdownUrl: string,
  structuredUrl: string,
): string {
  const rows = chart.points
    .map(
      (p) => `
      <tr><td>${escapeHtml(p.label)}</td>
          <td data-testid="dash-${p.criterion_id}" data-value="${p.value}">
            ${halfUpOneDecimal(p.value)}</td></tr>`,
    )
    .join('');
  return `
  <section class="dashboard">
    <h2>Assessment result</h2>
    <p class="band-statement" data-testid="band-statement">
      General level ${halfUpOneDecimal(chart.overall.value)} —
      ${escapeHtml(bandStatement(chart.band))}</p>
    ${radarSvg(chart)}
    <table class="score-table">
      <thead><tr><th>Criterion</th><th>Score</th></tr></thead>
      <tbody>${rows}
        <tr class="overall-row"><td>Overall</td>
          <td data-testid="dash-overall" data-value="${chart.overall.value}">
            ${halfUpOneDecimal(chart.overall.value)}</td></tr>
      </tbody>
    </table>
    <p class="downloads">
      <a href="${markdownUrl}" download="report.md">Download report (Markdown)</a>
      ·
      <a href="${structuredUrl}" download="report.json">Download report (JSON)</a>
    </p>
  </section>`;
}
