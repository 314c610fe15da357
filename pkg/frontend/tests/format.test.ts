import { describe, expect, it } from 'vitest';

import { halfUpOneDecimal, fmtWeight } from '../src/format';

describe('halfUpOneDecimal', () => {
  it('matches the server report rounding', () => {
    expect(halfUpOneDecimal(3.525)).toBe('3.5');
    expect(halfUpOneDecimal(10 / 3)).toBe('3.3');
    expect(halfUpOneDecimal(3.3972222222222221)).toBe('3.4');
    expect(halfUpOneDecimal(3.45)).toBe('3.5'); // half-up, not banker's
    expect(halfUpOneDecimal(2)).toBe('2.0');
    expect(halfUpOneDecimal(4.95)).toBe('5.0');
    expect(halfUpOneDecimal(1)).toBe('1.0');
  });
});

describe('fmtWeight', () => {
  it('trims trailing noise', () => {
    expect(fmtWeight(25)).toBe('25');
    expect(fmtWeight(100 / 6)).toBe('16.67');
    expect(fmtWeight(0)).toBe('0');
  });
});
