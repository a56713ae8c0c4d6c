/**
 * Keyboard capture. Axis keys are level-triggered: the sampler reads
 * whichever are held at each 50 Hz sample. Mode switch and grip toggle
 * are edge-triggered: one pending flag per physical key-down, consumed
 * by the next sample, auto-repeat ignored.
 *
 * Key layout:
 *   arrows / WASD   axis1 (right +1, left -1), axis2 (up +1, down -1)
 *   M               mode switch
 *   Space           grip toggle
 */

export const SAMPLE_HZ = 50;

const AXIS1_POS = new Set(["ArrowRight", "KeyD"]);
const AXIS1_NEG = new Set(["ArrowLeft", "KeyA"]);
const AXIS2_POS = new Set(["ArrowUp", "KeyW"]);
const AXIS2_NEG = new Set(["ArrowDown", "KeyS"]);
const MODE_KEYS = new Set(["KeyM"]);
const GRIP_KEYS = new Set(["Space"]);

export interface InputSampleFields {
  axis1: number;
  axis2: number;
  mode_switch_pressed: boolean;
  grip_toggle_pressed: boolean;
}

export class KeyboardSampler {
  private held = new Set<string>();
  private pendingMode = false;
  private pendingGrip = false;

  /** Feed a key-down; `repeat` suppresses auto-repeated edges. */
  keyDown(code: string, repeat = false): boolean {
    const bound = AXIS1_POS.has(code) || AXIS1_NEG.has(code)
      || AXIS2_POS.has(code) || AXIS2_NEG.has(code)
      || MODE_KEYS.has(code) || GRIP_KEYS.has(code);
    if (!bound) {
      return false;
    }
    if (!repeat && !this.held.has(code)) {
      if (MODE_KEYS.has(code)) {
        this.pendingMode = true;
      }
      if (GRIP_KEYS.has(code)) {
        this.pendingGrip = true;
      }
    }
    this.held.add(code);
    return true;
  }

  keyUp(code: string): void {
    this.held.delete(code);
  }

  /** Drop all held state, e.g. when the window loses focus. */
  reset(): void {
    this.held.clear();
    this.pendingMode = false;
    this.pendingGrip = false;
  }

  private axis(pos: Set<string>, neg: Set<string>): number {
    let value = 0;
    for (const code of this.held) {
      if (pos.has(code)) {
        value += 1;
      } else if (neg.has(code)) {
        value -= 1;
      }
    }
    return Math.max(-1, Math.min(1, value));
  }

  /** Current sample; consumes any pending edge flags. */
  sample(): InputSampleFields {
    const fields = {
      axis1: this.axis(AXIS1_POS, AXIS1_NEG),
      axis2: this.axis(AXIS2_POS, AXIS2_NEG),
      mode_switch_pressed: this.pendingMode,
      grip_toggle_pressed: this.pendingGrip,
    };
    this.pendingMode = false;
    this.pendingGrip = false;
    return fields;
  }
}
