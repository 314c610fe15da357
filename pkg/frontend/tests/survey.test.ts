import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from '../src/api';
import { distribution } from '../src/views/board';
import {
  currentAnswer,
  renderSurveyView,
  surveySteps,
  validateSelection,
} from '../src/views/survey';
import { seedCollectingSession } from './helpers/fixture';
import { startServer, TestServer } from './helpers/server';

describe('client-side validation', () => {
  it('blocks submission without a selected level', () => {
    expect(validateSelection(null)).toMatch(/Pick a maturity level/);
    expect(validateSelection(0)).toMatch(/outside 1-5/);
    expect(validateSelection(6)).toMatch(/outside 1-5/);
    expect(validateSelection(3)).toBeNull();
  });
});

describe('survey flow against the live server', () => {
  let server: TestServer;
  let api: ApiClient;
  const sessionId = 'ui-collect';

  beforeAll(async () => {
    server = await startServer();
    await seedCollectingSession(server.baseUrl, sessionId);
    api = new ApiClient(server.baseUrl, 'it-lead');
  }, 60000);

  afterAll(async () => {
    await server.stop();
  });

  it('shows every reference state before level selection', async () => {
    const session = await api.getSession(sessionId);
    const model = await api.getModel(session.model_id, session.model_version);
    const steps = surveySteps(model);
    expect(steps).toHaveLength(17);

    const salesIndex = steps.findIndex(
      (s) => s.practice.name === 'Use of electronic sales channels',
    );
    const html = renderSurveyView({
      model,
      session,
      assessorId: 'it-lead',
      stepIndex: salesIndex,
      selection: 3,
      comment: '',
      error: null,
      notice: null,
    });
    for (const descriptor of steps[salesIndex].practice.descriptors) {
      expect(html).toContain(
        descriptor.reference_state
          .replace(/&/g, '&amp;')
          .replace(/</g, '&lt;')
          .replace(/>/g, '&gt;')
          .replace(/"/g, '&quot;'),
      );
    }
    // Level-3 text visible while level 3 is selected, before any submit.
    expect(html).toContain(
      'The web portal implements an online sales platform with some products');
    expect(html).toContain('Not answered yet');
  });

  it('a submitted answer appears in the facilitator distribution at once', async () => {
    await api.submitResponse(sessionId, 'electronic-sales-channels', 3, 'ok');
    // Immediate refetch, i.e. well within one polling interval.
    const facilitatorView = await new ApiClient(server.baseUrl).getSession(sessionId);
    const dist = distribution(facilitatorView, 'electronic-sales-channels');
    expect(dist.levels).toContain(3);
    expect(dist.counts[2]).toBe(1);
  });

  it('resubmission updates the current-answer badge', async () => {
    await api.submitResponse(sessionId, 'electronic-sales-channels', 4);
    const session = await api.getSession(sessionId);
    expect(currentAnswer(session, 'it-lead', 'electronic-sales-channels')).toBe(4);
    const model = await api.getModel(session.model_id, session.model_version);
    const steps = surveySteps(model);
    const idx = steps.findIndex(
      (s) => s.practice.id === 'electronic-sales-channels',
    );
    const html = renderSurveyView({
      model,
      session,
      assessorId: 'it-lead',
      stepIndex: idx,
      selection: null,
      comment: '',
      error: null,
      notice: null,
    });
    expect(html).toContain('Your current answer: level 4');
    // Only one effective response per assessor+practice on the server.
    const mine = session.responses.filter(
      (r) => r.assessor_id === 'it-lead' &&
        r.practice_id === 'electronic-sales-channels',
    );
    expect(mine).toHaveLength(1);
  });

  it('a forced invalid submit is rejected server-side', async () => {
    await expect(
      api.submitResponse(sessionId, 'electronic-sales-channels', 0),
    ).rejects.toMatchObject({ code: 'level-out-of-range', status: 400 });
    await expect(
      api.submitResponse(sessionId, 'electronic-sales-channels', 7),
    ).rejects.toMatchObject({ code: 'level-out-of-range', status: 400 });
  });

  it('unknown assessor identity is rejected', async () => {
    const stranger = new ApiClient(server.baseUrl, 'nobody');
    await expect(
      stranger.submitResponse(sessionId, 'electronic-sales-channels', 3),
    ).rejects.toBeInstanceOf(ApiError);
  });
});
