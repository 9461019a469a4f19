import * as tf from "@tensorflow/tfjs";

import type { RgbImage } from "./ppm.js";

/**
 * Convert an image to a float tensor in [0, 1] scaled to the given
 * square side length. Bilinear with aligned corners, so the four
 * corner pixels of the source survive any upscale exactly; small
 * inputs (thumbnails, icons) are blown up rather than rejected.
 */
export function toNetworkInput(image: RgbImage, size: number): tf.Tensor3D {
  return tf.tidy(() => {
    const raw = tf.tensor3d(Float32Array.from(image.pixels), [image.height, image.width, 3]);
    const scaled = raw.div<tf.Tensor3D>(255);
    if (image.width === size && image.height === size) return scaled.clone();
    return tf.image.resizeBilinear(scaled, [size, size], true);
  });
}
