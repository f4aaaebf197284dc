/**
 * UTF-8 byte-offset bookkeeping for JS (UTF-16) strings.
 *
 * All spans in the annotation schema are [start, end) byte offsets into the
 * UTF-8 encoding of the text, so every code-unit index coming out of a regex
 * has to be translated before it is written out.
 */

export class ByteMap {
  private readonly unitToByte: Int32Array;
  readonly byteLength: number;

  constructor(readonly text: string) {
    this.unitToByte = new Int32Array(text.length + 1);
    let units = 0;
    let bytes = 0;
    for (const ch of text) {
      // ch is one code point (1 or 2 UTF-16 units)
      for (let k = 0; k < ch.length; k++) {
        this.unitToByte[units + k] = bytes;
      }
      units += ch.length;
      bytes += Buffer.byteLength(ch, "utf8");
    }
    this.unitToByte[units] = bytes;
    this.byteLength = bytes;
  }

  /** Byte offset of a code-unit index (must sit on a code-point boundary). */
  toByte(unitIndex: number): number {
    if (unitIndex < 0 || unitIndex > this.text.length) {
      throw new RangeError(`code-unit index ${unitIndex} out of range`);
    }
    return this.unitToByte[unitIndex];
  }
}

/** Slice a string by UTF-8 byte offsets. */
export function byteSlice(text: string, start: number, end: number): string {
  return Buffer.from(text, "utf8").subarray(start, end).toString("utf8");
}
