# Copyright 2026 The Binamix Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the mono 48 kHz sources the example scenes refer to.

Usage: python3 tools/make_example_audio.py [out_dir]   (default scenes/audio)
"""

import math
import random
import struct
import sys
import wave
from pathlib import Path

RATE = 48000
SECONDS = 2.0


def vocals(t, rng):
    f = 220.0 * (1.0 + 0.02 * math.sin(2 * math.pi * 5.0 * t))
    env = 0.5 + 0.5 * math.sin(2 * math.pi * 0.75 * t) ** 2
    return 0.3 * env * sum(math.sin(2 * math.pi * k * f * t) / k for k in (1, 2, 3))


def drums(t, rng):
    beat = t % 0.5
    kick = math.exp(-beat * 30.0) * math.sin(2 * math.pi * 60.0 * beat)
    hat = math.exp(-((t + 0.25) % 0.5) * 80.0) * rng.uniform(-1.0, 1.0)
    return 0.5 * kick + 0.15 * hat


def bass(t, rng):
    f = 55.0 if int(t * 2) % 2 == 0 else 73.4
    return 0.35 * math.tanh(3.0 * math.sin(2 * math.pi * f * t))


def other(t, rng):
    return 0.2 * sum(math.sin(2 * math.pi * f * t) for f in (440.0, 554.4, 659.3)) / 3


def write(path, fn, seed):
    rng = random.Random(seed)
    n = int(RATE * SECONDS)
    frames = bytearray()
    for i in range(n):
        fade = min(1.0, i / 480.0, (n - 1 - i) / 480.0)
        v = max(-1.0, min(1.0, fn(i / RATE, rng) * fade))
        frames += struct.pack("<h", int(round(v * 32767)))
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(RATE)
        w.writeframes(bytes(frames))


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "scenes/audio")
    out.mkdir(parents=True, exist_ok=True)
    for seed, (name, fn) in enumerate(
        [("vocals", vocals), ("drums", drums), ("bass", bass), ("other", other)]
    ):
        write(out / f"{name}.wav", fn, seed)
        print(out / f"{name}.wav")


if __name__ == "__main__":
    main()
