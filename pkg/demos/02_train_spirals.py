"""Train the same MLP on the spirals task with different activations.

Every arm starts from identical parameters and sees identical batch
order (both derive from the seed), so the only difference between the
relu and helu runs is the backward mask.
"""

import numpy as np

from helu import activations as act
from helu import data, nn

seed = 7
ds = data.gen_spirals(n=400, k=3, noise=0.15, seed=seed)
train_ds, test_ds = data.split(ds, 0.75, seed=seed)
config = nn.TrainConfig(learning_rate=0.05, epochs=150, seed=seed)

print(f"spirals: {train_ds.n} train / {test_ds.n} test, 3 arms, seed {seed}")
print(f"{'activation':>12} {'test acc':>9} {'dead':>6} {'band':>6}")
for label in ("relu", "helu:0", "helu:0.05", "gelu"):
    spec = act.parse_activation(label)
    model = nn.init([2, 32, 32, 3], seed=seed, activation=spec)
    trace = nn.train(model, train_ds, config, eval_dataset=test_ds)
    last = trace.rows[-1]
    print(f"{label:>12} {last.test_acc:9.3f} {last.dead_fraction:6.3f} {last.band_fraction:6.3f}")

print()
print("helu:0 reproduces relu exactly (alpha=0 degeneracy); helu:0.05 only")
print("diverges once an update is driven through the band.")
