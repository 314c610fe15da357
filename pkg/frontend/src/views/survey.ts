// Assessor survey: one practice per screen, all five reference states
// fully visible before a level is chosen.

import { escapeHtml } from '../format';
import { Criterion, ModelView, Practice, SessionView } from '../types';

export interface SurveyStep {
  criterion: Criterion;
  practice: Practice;
}

export interface SurveyState {
  model: ModelView;
  session: SessionView;
  assessorId: string;
  stepIndex: number;
  selection: number | null;
  comment: string;
  error: string | null;
  notice: string | null;
}

export function surveySteps(model: ModelView): SurveyStep[] {
  const steps: SurveyStep[] = [];
  for (const criterion of model.criteria) {
    for (const practice of criterion.practices) {
      steps.push({ criterion, practice });
    }
  }
  return steps;
}

export function currentAnswer(
  session: SessionView,
  assessorId: string,
  practiceId: string,
): number | null {
  const match = session.responses.find(
    (r) => r.assessor_id === assessorId && r.practice_id === practiceId,
  );
  return match ? match.level : null;
}

// Client-side gate; the server enforces the same rule with
// code level-out-of-range if something slips through.
export function validateSelection(selection: number | null): string | null {
  if (selection === null) {
    return 'Pick a maturity level (1-5) before submitting.';
  }
  if (!Number.isInteger(selection) || selection < 1 || selection > 5) {
    return `Level ${selection} is outside 1-5.`;
  }
  return null;
}

export function canSubmit(session: SessionView): boolean {
  if (session.phase === 'collecting') return true;
  return (
    session.phase === 'consensus' &&
    (session.gathering_mode === 'joint' || session.gathering_mode === 'combined')
  );
}

export function renderSurveyView(state: SurveyState): string {
  const steps = surveySteps(state.model);
  const step = steps[state.stepIndex];
  if (!step) return '<p>No practices to survey.</p>';
  const { criterion, practice } = step;
  const answered = currentAnswer(state.session, state.assessorId, practice.id);
  const scaleLabels = new Map(state.model.scale.map((s) => [s.level, s.label]));

  const descriptorCards = practice.descriptors
    .map((d) => {
      const checked = state.selection === d.level ? 'checked' : '';
      const current = answered === d.level ? ' (your current answer)' : '';
      return `
      <label class="descriptor ${checked ? 'selected' : ''}">
        <input type="radio" name="level" value="${d.level}" ${checked}
               data-action="pick-level">
        <span class="descriptor-head">Level ${d.level} — ${escapeHtml(
          scaleLabels.get(d.level) ?? '',
        )}${current}</span>
        <span class="descriptor-body">${escapeHtml(d.reference_state)}</span>
      </label>`;
    })
    .join('\n');

  const badge =
    answered !== null
      ? `<span class="badge" data-testid="current-answer">Your current answer: level ${answered}</span>`
      : '<span class="badge badge-empty" data-testid="current-answer">Not answered yet</span>';

  const locked = !canSubmit(state.session);

  return `
  <section class="survey">
    <header>
      <p class="progress-label">Practice ${state.stepIndex + 1} of ${steps.length}
        · ${escapeHtml(criterion.name)}</p>
      <h2>${escapeHtml(practice.name)}</h2>
      <p class="practice-description">${escapeHtml(practice.description)}</p>
      ${badge}
    </header>
    <div class="descriptors">${descriptorCards}</div>
    <label class="comment-box">Comment (optional)
      <textarea data-action="comment" rows="2">${escapeHtml(state.comment)}</textarea>
    </label>
    ${state.error ? `<p class="error" data-testid="survey-error">${escapeHtml(state.error)}</p>` : ''}
    ${state.notice ? `<p class="notice">${escapeHtml(state.notice)}</p>` : ''}
    <footer class="survey-nav">
      <button data-action="prev" ${state.stepIndex === 0 ? 'disabled' : ''}>Back</button>
      <button data-action="submit" class="primary" ${locked ? 'disabled' : ''}>
        ${answered !== null ? 'Resubmit' : 'Submit'}</button>
      <button data-action="next" ${state.stepIndex >= steps.length - 1 ? 'disabled' : ''}>Next</button>
    </footer>
    ${locked ? '<p class="notice">Collection is closed for this session.</p>' : ''}
  </section>`;
}
