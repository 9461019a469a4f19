/** Minimal binary PPM (P6) reader. */

import { DataError } from "./networks.js";

export interface RgbImage {
  readonly width: number;
  readonly height: number;
  /** Row-major RGB triples, length = 3 * width * height. */
  readonly pixels: Uint8Array;
}

function isSpace(byte: number): boolean {
  return byte === 0x20 || byte === 0x09 || byte === 0x0a || byte === 0x0d || byte === 0x0c || byte === 0x0b;
}

/**
 * Read one whitespace-delimited header token starting at `pos`,
 * skipping comment lines ('#' to end of line). Returns the token and
 * the offset just past it.
 */
function readToken(buf: Uint8Array, pos: number): [string, number] {
  while (pos < buf.length) {
    if (isSpace(buf[pos]!)) {
      pos += 1;
    } else if (buf[pos] === 0x23) {
      while (pos < buf.length && buf[pos] !== 0x0a) pos += 1;
    } else {
      break;
    }
  }
  const start = pos;
  while (pos < buf.length && !isSpace(buf[pos]!) && buf[pos] !== 0x23) pos += 1;
  if (start === pos) throw new DataError("truncated PPM header");
  return [Buffer.from(buf.subarray(start, pos)).toString("ascii"), pos];
}

export function decodePpm(buf: Uint8Array): RgbImage {
  let pos: number;
  let token: string;
  [token, pos] = readToken(buf, 0);
  if (token !== "P6") throw new DataError(`not a binary PPM file (magic '${token}')`);

  const fields: number[] = [];
  for (let i = 0; i < 3; i += 1) {
    [token, pos] = readToken(buf, pos);
    const value = Number(token);
    if (!Number.isInteger(value) || value <= 0) {
      throw new DataError(`bad PPM header field '${token}'`);
    }
    fields.push(value);
  }
  const [width, height, maxval] = fields as [number, number, number];
  if (maxval > 255) throw new DataError(`unsupported PPM maxval ${maxval}`);

  // Exactly one whitespace byte separates the header from pixel data.
  if (pos >= buf.length || !isSpace(buf[pos]!)) throw new DataError("truncated PPM header");
  pos += 1;

  const need = 3 * width * height;
  if (buf.length - pos < need) {
    throw new DataError(`PPM pixel data truncated (need ${need} bytes, have ${buf.length - pos})`);
  }
  return { width, height, pixels: buf.slice(pos, pos + need) };
}
