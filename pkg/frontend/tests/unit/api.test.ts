import { afterEach, describe, expect, it, vi } from 'vitest';

import { ApiClient, MAX_TIME_SAMPLES, strideFor, ValidationError } from '../../src/api';

describe('strideFor', () => {
  it('keeps payloads at or under the sample budget', () => {
    expect(strideFor(10001)).toBe(51);
    expect(Math.ceil(10001 / strideFor(10001))).toBeLessThanOrEqual(MAX_TIME_SAMPLES);
    expect(strideFor(200)).toBe(1);
    expect(strideFor(201)).toBe(2);
    expect(strideFor(1)).toBe(1);
  });

  it('honors a custom budget', () => {
    expect(strideFor(1000, 10)).toBe(100);
  });
});

describe('ApiClient', () => {
  afterEach(() => {
    vi.unstubAllGlobals();
  });

  it('surfaces key-path validation errors from a 400 response', async () => {
    vi.stubGlobal(
      'fetch',
      vi.fn(async () =>
        new Response(
          JSON.stringify({ errors: [{ path: 'mesh.n_space', message: 'too small' }] }),
          { status: 400 },
        ),
      ),
    );
    const client = new ApiClient('http://service');
    await expect(client.submitJob({} as never)).rejects.toThrowError(ValidationError);
    try {
      await client.submitJob({} as never);
    } catch (error) {
      expect((error as ValidationError).issues[0].path).toBe('mesh.n_space');
    }
  });

  it('returns the job id from a 202 response', async () => {
    const fetchMock = vi.fn(async (url: RequestInfo | URL, init?: RequestInit) => {
      expect(String(url)).toBe('http://service/api/jobs');
      expect(init?.method).toBe('POST');
      return new Response(JSON.stringify({ job_id: 'abc123' }), { status: 202 });
    });
    vi.stubGlobal('fetch', fetchMock);
    const client = new ApiClient('http://service');
    expect(await client.submitJob({ schema_version: 1 } as never)).toBe('abc123');
  });

  it('polls until the job settles', async () => {
    const states = ['queued', 'running', 'running', 'done'];
    let call = 0;
    vi.stubGlobal(
      'fetch',
      vi.fn(async () =>
        new Response(
          JSON.stringify({ job_id: 'j', state: states[call++], progress: call / 4, label: '' }),
          { status: 200 },
        ),
      ),
    );
    const client = new ApiClient('http://service');
    const seen: string[] = [];
    const status = await client.waitForJob('j', 1, (s) => seen.push(s.state));
    expect(status.state).toBe('done');
    expect(seen).toEqual(states);
  });
});
