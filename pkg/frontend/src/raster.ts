/** Tiny software rasterizer: everything the figures need, nothing more. */

import { GLYPH_HEIGHT, GLYPH_SPACING, GLYPH_WIDTH, glyphFor, textWidth } from "./font.js";

export type Color = readonly [number, number, number];

export const BLACK: Color = [0, 0, 0];
export const WHITE: Color = [255, 255, 255];
export const GREY: Color = [190, 190, 190];
export const BLUE: Color = [31, 119, 180];
export const RED: Color = [214, 39, 40];

export class Canvas {
  readonly width: number;
  readonly height: number;
  readonly pixels: Uint8Array; // RGBA rows, top to bottom

  constructor(width: number, height: number, background: Color = WHITE) {
    this.width = width;
    this.height = height;
    this.pixels = new Uint8Array(width * height * 4);
    for (let i = 0; i < width * height; i++) {
      this.pixels[4 * i] = background[0];
      this.pixels[4 * i + 1] = background[1];
      this.pixels[4 * i + 2] = background[2];
      this.pixels[4 * i + 3] = 255;
    }
  }

  set(x: number, y: number, color: Color): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = 4 * (y * this.width + x);
    this.pixels[i] = color[0];
    this.pixels[i + 1] = color[1];
    this.pixels[i + 2] = color[2];
    this.pixels[i + 3] = 255;
  }

  fillRect(x0: number, y0: number, w: number, h: number, color: Color): void {
    for (let y = y0; y < y0 + h; y++) {
      for (let x = x0; x < x0 + w; x++) {
        this.set(x, y, color);
      }
    }
  }

  line(x0: number, y0: number, x1: number, y1: number, color: Color, thickness = 1): void {
    // Bresenham; thickness paints a small square around each step
    let x = Math.round(x0);
    let y = Math.round(y0);
    const ex = Math.round(x1);
    const ey = Math.round(y1);
    const dx = Math.abs(ex - x);
    const dy = -Math.abs(ey - y);
    const sx = x < ex ? 1 : -1;
    const sy = y < ey ? 1 : -1;
    let err = dx + dy;
    const r = Math.floor(thickness / 2);
    for (;;) {
      if (thickness <= 1) {
        this.set(x, y, color);
      } else {
        this.fillRect(x - r, y - r, thickness, thickness, color);
      }
      if (x === ex && y === ey) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
    }
  }

  disc(cx: number, cy: number, radius: number, color: Color): void {
    const r2 = radius * radius + radius * 0.5;
    for (let y = Math.floor(cy - radius); y <= Math.ceil(cy + radius); y++) {
      for (let x = Math.floor(cx - radius); x <= Math.ceil(cx + radius); x++) {
        const d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        if (d2 <= r2) this.set(x, y, color);
      }
    }
  }

  /** Draws upper-cased text with its top-left corner at (x, y). */
  text(x: number, y: number, content: string, color: Color): void {
    let cx = x;
    for (const ch of content) {
      const glyph = glyphFor(ch);
      for (let gy = 0; gy < GLYPH_HEIGHT; gy++) {
        for (let gx = 0; gx < GLYPH_WIDTH; gx++) {
          if (glyph[gy][gx] === "1") this.set(cx + gx, y + gy, color);
        }
      }
      cx += GLYPH_WIDTH + GLYPH_SPACING;
    }
  }

  textCentered(cx: number, y: number, content: string, color: Color): void {
    this.text(Math.round(cx - textWidth(content) / 2), y, content, color);
  }

  textRightAligned(x: number, y: number, content: string, color: Color): void {
    this.text(x - textWidth(content), y, content, color);
  }

  /** Draws text rotated 90 degrees counter-clockwise, top-left at (x, y). */
  textVertical(x: number, y: number, content: string, color: Color): void {
    let cy = y + textWidth(content);
    for (const ch of content) {
      const glyph = glyphFor(ch);
      for (let gy = 0; gy < GLYPH_HEIGHT; gy++) {
        for (let gx = 0; gx < GLYPH_WIDTH; gx++) {
          if (glyph[gy][gx] === "1") this.set(x + gy, cy - gx, color);
        }
      }
      cy -= GLYPH_WIDTH + GLYPH_SPACING;
    }
  }
}
