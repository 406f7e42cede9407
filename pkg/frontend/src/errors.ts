/** Error carrying the core's stable error-code string (e.g. "config-error"). */
export class VarmatchBridgeError extends Error {
  constructor(public readonly code: string, message: string) {
    super(message);
    this.name = 'VarmatchBridgeError';
  }
}
