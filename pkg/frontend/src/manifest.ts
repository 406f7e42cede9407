import * as fs from 'node:fs';
import { VarmatchBridgeError } from './errors';

export interface PatchMeta {
  image: string;
  x: number;
  y: number;
  size: number;
  mean: number;
  variance: number;
}

export interface PairMeta {
  lr: PatchMeta;
  hr: PatchMeta;
}

const FIELDS = [
  'lr_image', 'lr_x', 'lr_y', 'lr_size', 'lr_mean', 'lr_var',
  'hr_image', 'hr_x', 'hr_y', 'hr_size', 'hr_mean', 'hr_var',
] as const;

function side(rec: Record<string, unknown>, prefix: 'lr' | 'hr'): PatchMeta {
  return {
    image: rec[`${prefix}_image`] as string,
    x: rec[`${prefix}_x`] as number,
    y: rec[`${prefix}_y`] as number,
    size: rec[`${prefix}_size`] as number,
    mean: rec[`${prefix}_mean`] as number,
    variance: rec[`${prefix}_var`] as number,
  };
}

/** Parse one JSONL manifest; every line must carry all twelve fields. */
export function parseManifest(path: string): PairMeta[] {
  let text: string;
  try {
    text = fs.readFileSync(path, 'utf8');
  } catch (err) {
    throw new VarmatchBridgeError('io-error', `cannot read manifest ${path}: ${String(err)}`);
  }
  const pairs: PairMeta[] = [];
  const lines = text.split('\n');
  for (let i = 0; i < lines.length; i++) {
    if (!lines[i].trim()) continue;
    let rec: Record<string, unknown>;
    try {
      rec = JSON.parse(lines[i]) as Record<string, unknown>;
    } catch {
      throw new VarmatchBridgeError('error', `${path}:${i + 1}: malformed JSON line`);
    }
    for (const field of FIELDS) {
      const want = field.endsWith('_image') ? 'string' : 'number';
      if (typeof rec[field] !== want) {
        throw new VarmatchBridgeError('error', `${path}:${i + 1}: missing or mistyped ${field}`);
      }
    }
    pairs.push({ lr: side(rec, 'lr'), hr: side(rec, 'hr') });
  }
  return pairs;
}

export function manifestName(index: number): string {
  return `manifest_${String(index).padStart(5, '0')}.jsonl`;
}
