import * as fs from 'node:fs';
import { PNG } from 'pngjs';
import { VarmatchBridgeError } from './errors';

/** Decoded 8-bit image in planar [channel][row][column] layout. */
export interface PlanarImage {
  channels: 1 | 3;
  width: number;
  height: number;
  /** length = channels * height * width */
  planes: Uint8Array;
}

/**
 * Decode an 8-bit PNG to planar form, mirroring the core's channel rules:
 * grayscale (with or without alpha) yields one channel, everything else
 * yields RGB; alpha is dropped.
 */
export function decodePng(path: string): PlanarImage {
  let raw: Buffer;
  try {
    raw = fs.readFileSync(path);
  } catch (err) {
    throw new VarmatchBridgeError('io-error', `cannot read ${path}: ${String(err)}`);
  }
  let png: PNG;
  try {
    png = PNG.sync.read(raw);
  } catch (err) {
    throw new VarmatchBridgeError('format-error', `cannot decode ${path}: ${String(err)}`);
  }
  const depth = (png as unknown as { depth: number }).depth;
  if (depth !== 8) {
    throw new VarmatchBridgeError('format-error', `${path}: bit depth ${depth}, only 8 supported`);
  }
  const colorType = (png as unknown as { colorType: number }).colorType;
  const gray = colorType === 0 || colorType === 4;
  const channels = gray ? 1 : 3;
  const { width, height, data } = png;
  const planeSize = width * height;
  const planes = new Uint8Array(channels * planeSize);
  // pngjs hands back interleaved RGBA regardless of source color type
  for (let i = 0; i < planeSize; i++) {
    if (gray) {
      planes[i] = data[i * 4];
    } else {
      planes[i] = data[i * 4];
      planes[planeSize + i] = data[i * 4 + 1];
      planes[2 * planeSize + i] = data[i * 4 + 2];
    }
  }
  return { channels: channels as 1 | 3, width, height, planes };
}

/**
 * Copy a size x size patch at (x, y) into `out` at batch slot `slot`,
 * replicating a grayscale plane when the batch is 3-channel.
 */
export function copyPatch(
  image: PlanarImage,
  x: number,
  y: number,
  size: number,
  out: Uint8Array,
  slot: number,
  outChannels: number,
): void {
  if (x < 0 || y < 0 || x + size > image.width || y + size > image.height) {
    throw new VarmatchBridgeError(
      'out-of-bounds',
      `patch ${size}@(${x},${y}) outside ${image.width}x${image.height}`,
    );
  }
  const patchPlane = size * size;
  const base = slot * outChannels * patchPlane;
  for (let c = 0; c < outChannels; c++) {
    const srcPlane = image.channels === 1 ? 0 : c;
    const srcBase = srcPlane * image.width * image.height;
    for (let row = 0; row < size; row++) {
      const src = srcBase + (y + row) * image.width + x;
      out.set(image.planes.subarray(src, src + size), base + c * patchPlane + row * size);
    }
  }
}
