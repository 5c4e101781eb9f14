"""The NumPy kernels are picked when the extension is disabled and give the same answers."""
import json
import os
import subprocess
import sys

PROBE = """
import json
import numpy as np
import plpdim
from plpdim import conditional_ccdf
mu = np.array([[0.7, 0.0, 1.3, 0.4], [2.0, 0.5, 0.0, 0.0]])
print(json.dumps({"backend": plpdim.BACKEND,
                  "ccdf": conditional_ccdf(mu, [0, 1, 3, 7, 12]).tolist()}))
"""


def _probe(pure):
    env = dict(os.environ)
    env.pop("PLPDIM_PURE_PYTHON", None)
    if pure:
        env["PLPDIM_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", PROBE], env=env, check=True,
                         capture_output=True, text=True).stdout
    return json.loads(out)


def test_env_var_forces_numpy_backend():
    assert _probe(pure=True)["backend"] == "python"


def test_backends_give_same_ccdf():
    pure, default = _probe(pure=True), _probe(pure=False)
    for a, b in zip(pure["ccdf"], default["ccdf"]):
        for x, y in zip(a, b):
            assert abs(x - y) <= 1e-13
