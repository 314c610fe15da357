// Facilitator consensus board: per-practice response distributions, agreed
// scores, gap notes, the weight editor with server-backed what-if preview,
// and the finalize gate.
//
// Every score shown comes from a server response (session state, or the
// what-if scores endpoint). The client does no scoring arithmetic: until
// the server can score the session, score cells show "pending".

import { escapeHtml, fmtWeight, halfUpOneDecimal } from '../format';
import {
  ModelView,
  ScoresView,
  SessionView,
  WeightMapping,
} from '../types';

export interface BoardState {
  model: ModelView;
  session: SessionView;
  serverScores: ScoresView | null; // latest what-if/scores response
  draftWeights: WeightMapping | null; // facilitator edits, not yet committed
  whatIfPending: boolean;
  readOnly: boolean;
  error: string | null;
}

export interface Distribution {
  practiceId: string;
  levels: number[];
  counts: number[]; // index 0 -> level 1
}

export function distribution(session: SessionView, practiceId: string): Distribution {
  const levels = session.responses
    .filter((r) => r.practice_id === practiceId)
    .map((r) => r.level);
  const counts = [0, 0, 0, 0, 0];
  for (const level of levels) {
    if (level >= 1 && level <= 5) counts[level - 1] += 1;
  }
  return { practiceId, levels, counts };
}

export interface Completeness {
  complete: boolean;
  missing: string[]; // practice ids with no responses and no consensus
}

export function completeness(model: ModelView, session: SessionView): Completeness {
  const answered = new Set(session.responses.map((r) => r.practice_id));
  const agreed = new Set(session.consensus_records.map((c) => c.practice_id));
  const missing: string[] = [];
  for (const criterion of model.criteria) {
    for (const practice of criterion.practices) {
      if (!answered.has(practice.id) && !agreed.has(practice.id)) {
        missing.push(practice.id);
      }
    }
  }
  return { complete: missing.length === 0, missing };
}

export function effectiveWeights(state: BoardState): WeightMapping {
  return state.draftWeights ?? state.session.weights;
}

export function dotPlotSvg(dist: Distribution): string {
  const width = 130;
  const height = 26;
  const dots: string[] = [];
  dist.counts.forEach((count, i) => {
    const x = 13 + i * 26;
    for (let j = 0; j < count; j += 1) {
      dots.push(
        `<circle cx="${x}" cy="${height - 6 - j * 7}" r="3" class="dot" data-level="${i + 1}"></circle>`,
      );
    }
    dots.push(
      `<text x="${x}" y="${height + 8}" text-anchor="middle" class="dot-label">${i + 1}</text>`,
    );
  });
  return `<svg viewBox="0 0 ${width} ${height + 12}" width="${width}" height="${height + 12}"
               class="dot-plot" data-practice="${dist.practiceId}">${dots.join('')}</svg>`;
}

function practiceScoreCells(state: BoardState, practiceId: string): string {
  const scores = state.serverScores;
  const entry = scores?.practices.find((p) => p.practice_id === practiceId);
  const average =
    entry && entry.average !== null
      ? `<span data-testid="avg-${practiceId}" data-value="${entry.average}">${halfUpOneDecimal(entry.average)}</span>`
      : '<span class="pending">pending</span>';
  const record = state.session.consensus_records.find(
    (c) => c.practice_id === practiceId,
  );
  const agreed = record
    ? `<span data-testid="agreed-${practiceId}" data-value="${record.agreed_score}">${halfUpOneDecimal(record.agreed_score)}</span>`
    : '<span class="pending">—</span>';
  return `<td>${average}</td><td>${agreed}</td>`;
}

export function renderWeightEditor(state: BoardState): string {
  const weights = effectiveWeights(state);
  const scores = state.serverScores;
  const rows = state.model.criteria
    .map((criterion) => {
      const criterionScore = scores?.criteria.find(
        (c) => c.criterion_id === criterion.id,
      );
      const scoreCell = state.whatIfPending
        ? '<span class="pending">…</span>'
        : criterionScore
          ? `<span class="criterion-preview" data-testid="criterion-${criterion.id}"
                   data-value="${criterionScore.score}">${halfUpOneDecimal(criterionScore.score)}</span>`
          : '<span class="pending">pending</span>';
      const sliders = criterion.practices
        .map((practice) => {
          const value = weights[criterion.id]?.[practice.id] ?? 0;
          return `
          <label class="weight-row">
            <span class="weight-name">${escapeHtml(practice.name)}</span>
            <input type="range" min="0" max="100" step="1" value="${Math.round(value)}"
                   data-action="weight" data-criterion="${criterion.id}"
                   data-practice="${practice.id}" ${state.readOnly ? 'disabled' : ''}>
            <span class="weight-value">${fmtWeight(value)}%</span>
          </label>`;
        })
        .join('\n');
      return `
      <details class="criterion-weights" open>
        <summary>${escapeHtml(criterion.name)} — criterion score: ${scoreCell}</summary>
        ${sliders}
      </details>`;
    })
    .join('\n');
  const overall = scores
    ? `<p class="overall-preview">Overall (computed):
         <strong data-testid="overall-preview" data-value="${scores.overall.computed}">
           ${halfUpOneDecimal(scores.overall.computed)}</strong></p>`
    : '';
  return `
  <section class="weight-editor">
    <h3>Weights & what-if</h3>
    ${rows}
    ${state.whatIfPending ? '' : overall}
    <button data-action="commit-weights" class="primary"
            ${state.readOnly || !state.draftWeights ? 'disabled' : ''}>
      Commit weights</button>
  </section>`;
}

export function renderBoardView(state: BoardState): string {
  const { model, session } = state;
  const gate = completeness(model, session);
  const practiceNames = new Map<string, string>();
  for (const criterion of model.criteria) {
    for (const practice of criterion.practices) {
      practiceNames.set(practice.id, practice.name);
    }
  }

  const tables = model.criteria
    .map((criterion) => {
      const rows = criterion.practices
        .map((practice) => {
          const dist = distribution(session, practice.id);
          return `
          <tr data-practice-row="${practice.id}">
            <td class="practice-name">${escapeHtml(practice.name)}</td>
            <td>${dotPlotSvg(dist)}</td>
            ${practiceScoreCells(state, practice.id)}
            <td>${
              state.readOnly
                ? ''
                : `<button data-action="edit-consensus" data-practice="${practice.id}">
                     Record consensus</button>`
            }</td>
          </tr>`;
        })
        .join('\n');
      return `
      <h3>${escapeHtml(criterion.name)}</h3>
      <table class="board-table">
        <thead><tr><th>Practice</th><th>Responses</th><th>Average</th>
          <th>Agreed</th><th></th></tr></thead>
        <tbody>${rows}</tbody>
      </table>`;
    })
    .join('\n');

  const missingNames = gate.missing.map((pid) => practiceNames.get(pid) ?? pid);
  const finalizeBlock = state.readOnly
    ? ''
    : `
    <section class="finalize">
      <button data-action="finalize" class="primary" ${gate.complete ? '' : 'disabled'}
              data-testid="finalize-button">Finalize assessment</button>
      ${
        gate.complete
          ? ''
          : `<p class="notice" data-testid="finalize-blockers">Unscored practices:
               ${missingNames.map(escapeHtml).join('; ')}</p>`
      }
    </section>`;

  return `
  <section class="board">
    <header>
      <h2>Consensus board — ${escapeHtml(session.id)}</h2>
      <p>Phase: <strong data-testid="phase">${session.phase}</strong>
         · Mode: ${session.gathering_mode}
         · Assessors: ${session.assessors.length}</p>
      ${state.error ? `<p class="error">${escapeHtml(state.error)}</p>` : ''}
    </header>
    ${tables}
    ${renderWeightEditor(state)}
    ${finalizeBlock}
  </section>`;
}
