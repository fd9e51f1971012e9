"""Regenerates the bundled 256x256 stand-in images from scikit-image samples."""
import hashlib

import numpy as np
from PIL import Image
from skimage import data, transform

NAMES = ["astronaut", "coffee", "chelsea", "camera"]

for name in NAMES:
    img = getattr(data, name)()
    h, w = img.shape[:2]
    s = min(h, w)
    img = img[(h - s) // 2:(h - s) // 2 + s, (w - s) // 2:(w - s) // 2 + s]
    r = transform.resize(img, (256, 256), order=3, anti_aliasing=True, preserve_range=True)
    r = np.clip(np.rint(r), 0, 255).astype(np.uint8)
    Image.fromarray(r).save(f"{name}.png")
    print(name, hashlib.sha256(open(f"{name}.png", "rb").read()).hexdigest())
