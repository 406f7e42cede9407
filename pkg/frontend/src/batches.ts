import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';
import { BridgeConfig, BridgeConfigInput, configToFlags, parseConfig } from './config';
import { runSample } from './cli';
import { manifestName, PairMeta, parseManifest } from './manifest';
import { copyPatch, decodePng, PlanarImage } from './png';
import { VarmatchBridgeError } from './errors';

/** One batch of variance-matched patch pairs as contiguous pixel arrays. */
export interface BatchView {
  /** uint8, [batch][channel][row][column], freshly allocated per batch */
  lrPixels: Uint8Array;
  hrPixels: Uint8Array;
  lrShape: [number, number, number, number];
  hrShape: [number, number, number, number];
  /** per-pair coordinates and statistics, straight from the manifest */
  meta: PairMeta[];
}

export interface OpenOptions {
  /** Python interpreter to drive the core CLI with (default "python3"). */
  python?: string;
  /** Batches computed per CLI invocation before doubling (default 8). */
  chunk?: number;
}

/**
 * Infinite single-consumer iterator over sampled batches.
 *
 * Batches come from the core CLI, re-invoked with a growing --num-batches:
 * the sampler consumes one sequential RNG stream, so batch i is identical
 * no matter how many batches a run requests, and earlier manifests are
 * simply rewritten byte-for-byte. The handle owns a private output
 * directory; multiple handles never share state.
 */
export class CorpusPairHandle implements IterableIterator<BatchView> {
  readonly config: BridgeConfig;
  private readonly python: string;
  private readonly chunk: number;
  private readonly outDir: string;
  private readonly lrCache = new Map<string, PlanarImage>();
  private readonly hrCache = new Map<string, PlanarImage>();
  private consumed = 0;
  private produced = 0;
  private closed = false;

  constructor(
    private readonly lrDir: string,
    private readonly hrDir: string,
    config: BridgeConfigInput | undefined,
    options: OpenOptions = {},
  ) {
    this.config = parseConfig(config);
    this.python = options.python ?? 'python3';
    this.chunk = Math.max(1, options.chunk ?? 8);
    this.outDir = fs.mkdtempSync(path.join(os.tmpdir(), 'varmatch-bridge-'));
    // run the first chunk now so corpus and config problems surface at open
    try {
      this.ensure(0);
    } catch (err) {
      this.close();
      throw err;
    }
  }

  [Symbol.iterator](): IterableIterator<BatchView> {
    return this;
  }

  next(): IteratorResult<BatchView> {
    if (this.closed) {
      return { value: undefined, done: true };
    }
    this.ensure(this.consumed);
    const meta = parseManifest(path.join(this.outDir, manifestName(this.consumed)));
    const value: BatchView = {
      lrPixels: this.assemble(meta, 'lr'),
      hrPixels: this.assemble(meta, 'hr'),
      lrShape: this.shape(meta, 'lr'),
      hrShape: this.shape(meta, 'hr'),
      meta,
    };
    this.consumed += 1;
    return { value, done: false };
  }

  return(): IteratorResult<BatchView> {
    this.close();
    return { value: undefined, done: true };
  }

  /** Remove the handle's working directory; further next() calls end iteration. */
  close(): void {
    if (!this.closed) {
      this.closed = true;
      fs.rmSync(this.outDir, { recursive: true, force: true });
    }
  }

  private ensure(index: number): void {
    while (this.produced <= index) {
      const target = this.produced === 0 ? this.chunk : this.produced * 2;
      runSample(this.python, this.lrDir, this.hrDir, this.outDir, target,
                configToFlags(this.config));
      this.produced = target;
    }
  }

  private corpusFor(kind: 'lr' | 'hr'): { dir: string; cache: Map<string, PlanarImage> } {
    return kind === 'lr'
      ? { dir: this.lrDir, cache: this.lrCache }
      : { dir: this.hrDir, cache: this.hrCache };
  }

  private image(kind: 'lr' | 'hr', imageId: string): PlanarImage {
    const { dir, cache } = this.corpusFor(kind);
    let decoded = cache.get(imageId);
    if (!decoded) {
      decoded = decodePng(path.join(dir, imageId));
      cache.set(imageId, decoded);
    }
    return decoded;
  }

  private shape(meta: PairMeta[], kind: 'lr' | 'hr'): [number, number, number, number] {
    const size = kind === 'lr' ? this.config.lrPatch : this.config.hrPatch;
    return [meta.length, this.channels(meta, kind), size, size];
  }

  private channels(meta: PairMeta[], kind: 'lr' | 'hr'): number {
    // a gray plane is replicated when the batch mixes gray and RGB sources
    let channels = 1;
    for (const pair of meta) {
      if (this.image(kind, pair[kind].image).channels === 3) {
        channels = 3;
      }
    }
    return channels;
  }

  private assemble(meta: PairMeta[], kind: 'lr' | 'hr'): Uint8Array {
    const size = kind === 'lr' ? this.config.lrPatch : this.config.hrPatch;
    const channels = this.channels(meta, kind);
    const out = new Uint8Array(meta.length * channels * size * size);
    for (let slot = 0; slot < meta.length; slot++) {
      const ref = meta[slot][kind];
      if (ref.size !== size) {
        throw new VarmatchBridgeError(
          'error', `manifest size ${ref.size} disagrees with config ${size}`);
      }
      copyPatch(this.image(kind, ref.image), ref.x, ref.y, size, out, slot, channels);
    }
    return out;
  }
}

/** Open an iterator of variance-matched batches over two corpus directories. */
export function openCorpusPair(
  lrDir: string,
  hrDir: string,
  config?: BridgeConfigInput,
  options?: OpenOptions,
): CorpusPairHandle {
  return new CorpusPairHandle(lrDir, hrDir, config, options);
}
