// Seeds sessions on a live test server through the public API.

import { WeightMapping } from '../../src/types';

export const CONSENSUS_SCORES: Record<string, number> = {
  'customer-segmentation': 4.2,
  'customer-sentiment-analysis': 2.2,
  'prospect-behavior-analysis': 2.8,
  'customer-base-management': 3.8,
  'information-source-integration': 3.3,
  'electronic-sales-channels': 3.3,
  'electronic-marketing-channels': 4.0,
  'predictive-marketing': 2.7,
  'sales-process-digitization': 3.5,
  'sales-mobility': 3.7,
  'sales-process-visibility': 2.8,
  'digital-service-channels': 4.0,
  'channel-coherence': 2.8,
  'agile-service-tools': 3.5,
  'service-channel-availability': 3.2,
  'self-service-tools': 4.0,
  'service-feedback-channels': 2.5,
};

const SALES = [
  'electronic-sales-channels', 'electronic-marketing-channels',
  'predictive-marketing', 'sales-process-digitization', 'sales-mobility',
  'sales-process-visibility',
];
const SERVICE = [
  'digital-service-channels', 'channel-coherence', 'agile-service-tools',
  'service-channel-availability', 'self-service-tools',
  'service-feedback-channels',
];

export const CASE_WEIGHTS: WeightMapping = {
  'customer-understanding': {
    'customer-segmentation': 25,
    'customer-sentiment-analysis': 0,
    'prospect-behavior-analysis': 25,
    'customer-base-management': 25,
    'information-source-integration': 25,
  },
  'marketing-sales-process': Object.fromEntries(SALES.map((p) => [p, 100 / 6])),
  'customer-service': Object.fromEntries(SERVICE.map((p) => [p, 100 / 6])),
};

async function post(baseUrl: string, path: string, body: unknown): Promise<void> {
  const response = await fetch(baseUrl + path, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body),
  });
  if (!response.ok) {
    throw new Error(`${path} failed: ${response.status} ${await response.text()}`);
  }
}

export async function seedCollectingSession(
  baseUrl: string,
  sessionId: string,
): Promise<void> {
  await post(baseUrl, '/api/sessions', {
    model_id: 'customer-alignment',
    org_profile: { sector: 'Technology and services' },
    gathering_mode: 'individual-survey',
    id: sessionId,
  });
  await post(baseUrl, `/api/sessions/${sessionId}/assessors`, {
    id: 'it-lead', display_name: 'IT lead', domain_role: 'IT',
  });
  await post(baseUrl, `/api/sessions/${sessionId}/assessors`, {
    id: 'biz-lead', display_name: 'Business lead', domain_role: 'Business',
  });
  await post(baseUrl, `/api/sessions/${sessionId}/phase`,
             { transition: 'open-collection' });
}

export async function seedFinalizedSession(
  baseUrl: string,
  sessionId: string,
): Promise<void> {
  await seedCollectingSession(baseUrl, sessionId);
  await post(baseUrl, `/api/sessions/${sessionId}/phase`,
             { transition: 'close-collection' });
  for (const [practiceId, score] of Object.entries(CONSENSUS_SCORES)) {
    await post(baseUrl, `/api/sessions/${sessionId}/consensus/${practiceId}`,
               { agreed_score: score });
  }
  const response = await fetch(`${baseUrl}/api/sessions/${sessionId}/weights`, {
    method: 'PUT',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify({ weights: CASE_WEIGHTS }),
  });
  if (!response.ok) throw new Error('weight setup failed');
  await post(baseUrl, `/api/sessions/${sessionId}/phase`,
             { transition: 'finalize' });
}

// Deterministic PRNG so the 20 random weight settings are reproducible.
export function makeRng(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state * 1664525 + 1013904223) >>> 0;
    return state / 2 ** 32;
  };
}

export function randomWeights(
  layout: { id: string; practices: { id: string }[] }[],
  rng: () => number,
): WeightMapping {
  const weights: WeightMapping = {};
  for (const criterion of layout) {
    const raw = criterion.practices.map(() => Math.round(rng() * 10));
    if (raw.every((w) => w === 0)) raw[0] = 1;
    const total = raw.reduce((a, b) => a + b, 0);
    weights[criterion.id] = Object.fromEntries(
      criterion.practices.map((p, i) => [p.id, (100 * raw[i]) / total]),
    );
  }
  return weights;
}
