"""Derivative-free maximization of the success probability over angles.

Four methods behind one interface: Nelder-Mead with restart-on-collapse,
differential evolution (rand/1/bin), simulated annealing, and uniform
random search.  All draw from counter-based Philox streams keyed by
(seed, method, restart), so results are bitwise reproducible and a run
with a smaller budget is an exact prefix of a longer run with the same
seed.  Budgets count objective evaluations, nothing else.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gates import SQRT_HALF
from .ising import LinearIsing, optimal_bits
from .probability import QaoaParams, prob_opt, prob_opt_batch

METHODS = (
    "nelder-mead",
    "differential-evolution",
    "simulated-annealing",
    "random-search",
)
_METHOD_IDS = {name: i for i, name in enumerate(METHODS)}

DEFAULT_BUDGET = 20000
DEFAULT_RESTARTS = 8

# Nelder-Mead shape coefficients: reflection, expansion, contraction, shrink
_NM_COEFFS = (1.0, 2.0, 0.5, 0.5)
_NM_EDGE = math.pi / 8.0
_NM_COLLAPSE = 1e-10

_DE_WEIGHT = 0.7
_DE_CROSSOVER = 0.9
_DE_POP_PER_DIM = 15

_SA_SIGMA = (math.pi / 4.0, 1e-4)
_SA_TEMP = (0.1, 1e-8)
_SA_CYCLE = 500

_RS_CHUNK = 512


@dataclass(frozen=True)
class OptimizerSpec:
    """One method's configuration; budget is per restart."""

    method: str
    budget: int = DEFAULT_BUDGET
    seed: int = 1
    restarts: int = DEFAULT_RESTARTS

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(
                f"unknown method {self.method!r}; choose from {', '.join(METHODS)}"
            )
        if not isinstance(self.budget, int) or self.budget < 1:
            raise ValueError(f"budget must be a positive integer, got {self.budget!r}")
        if not isinstance(self.restarts, int) or self.restarts < 1:
            raise ValueError(
                f"restarts must be a positive integer, got {self.restarts!r}"
            )
        if not isinstance(self.seed, int):
            raise ValueError(f"seed must be an integer, got {self.seed!r}")


@dataclass(frozen=True)
class OptimizationResult:
    best_value: float
    best_gammas: tuple[float, ...]
    best_betas: tuple[float, ...]
    evaluations_used: int
    method: str


def default_portfolio(
    seed: int = 1, budget: int = DEFAULT_BUDGET, restarts: int = DEFAULT_RESTARTS
) -> tuple[OptimizerSpec, ...]:
    """All four methods with shared seed, budget, and restart count."""
    return tuple(OptimizerSpec(m, budget, seed, restarts) for m in METHODS)


def gamma_period(model: LinearIsing):
    """Exact period of the landscape in each gamma, or None if unknown.

    The per-qubit amplitude picks up only a global sign when every
    gamma shifts by pi*t with t*a_l integral for all coefficients, so for
    rational coefficients p_l/q_l the period is pi*lcm(q)/gcd(p).
    Returns None when coefficients are not near small rationals or the
    period exceeds 16*pi.
    """
    nums, dens = [], []
    for a in model.coeffs:
        frac = Fraction(a).limit_denominator(64)
        if frac == 0 or abs(float(frac) - a) > 1e-12:
            return None
        nums.append(abs(frac.numerator))
        dens.append(frac.denominator)
    t = Fraction(math.lcm(*dens), math.gcd(*nums))
    period = math.pi * float(t)
    if period > 16.0 * math.pi:
        return None
    return period


def _make_rng(seed: int, method_id: int, restart: int) -> np.random.Generator:
    # Independent stream per (seed, method, restart); restart < 2**32.
    key = np.array(
        [seed % (1 << 64), (method_id << 32) | restart], dtype=np.uint64
    )
    return np.random.Generator(np.random.Philox(key=key))


def _scalar_objective(model: LinearIsing, p: int):
    """Inlined product-formula evaluation; semantics match prob_opt.

    The sequential methods call this millions of times, so the kernel
    avoids dataclass construction and revalidation on every point.
    """
    coeffs = model.coeffs
    bits = optimal_bits(model)

    def f(x) -> float:
        total = 1.0
        for a, bit in zip(coeffs, bits):
            v0 = complex(SQRT_HALF)
            v1 = complex(SQRT_HALF)
            for j in range(p):
                ph = cmath.exp(-1j * x[j] * a)
                v0 *= ph
                v1 *= ph.conjugate()
                c = math.cos(x[p + j])
                s = math.sin(x[p + j])
                v0, v1 = c * v0 - 1j * s * v1, -1j * s * v0 + c * v1
            v = v0 if bit == 0 else v1
            total *= v.real * v.real + v.imag * v.imag
        return total

    return f


def _batch_objective(model: LinearIsing, p: int):
    def fbatch(xs: np.ndarray) -> np.ndarray:
        return prob_opt_batch(model, xs[:, :p], xs[:, p:])

    return fbatch


class _Tracker:
    """Running best across evaluations, with the consumed-eval count."""

    __slots__ = ("best_value", "best_x", "used")

    def __init__(self):
        self.best_value = -math.inf
        self.best_x = None
        self.used = 0

    def offer(self, x, value: float):
        self.used += 1
        if value > self.best_value:
            self.best_value = value
            self.best_x = np.array(x, dtype=float, copy=True)

    def offer_batch(self, xs: np.ndarray, values: np.ndarray):
        self.used += len(values)
        i = int(np.argmax(values))
        if values[i] > self.best_value:
            self.best_value = float(values[i])
            self.best_x = np.array(xs[i], dtype=float, copy=True)


def _run_nelder_mead(f, rng, hi, budget, track):
    """Downhill simplex (maximizing), restarted on collapse within budget."""
    dim = hi.size
    refl, expa, contr, shrink = _NM_COEFFS
    start = track.used
    while track.used - start < budget:
        left = budget - (track.used - start)
        x0 = rng.uniform(0.0, hi)
        verts = [x0]
        for i in range(dim):
            v = x0.copy()
            v[i] += _NM_EDGE
            verts.append(v)
        vals = []
        for v in verts[: min(len(verts), left)]:
            fv = f(v)
            track.offer(v, fv)
            vals.append(fv)
        if len(vals) < len(verts):
            return
        verts = np.array(verts)
        vals = np.array(vals)
        while track.used - start < budget:
            order = np.argsort(-vals)
            verts = verts[order]
            vals = vals[order]
            if np.max(np.abs(verts - verts[0])) < _NM_COLLAPSE:
                break  # collapsed: reseed a fresh simplex
            centroid = verts[:-1].mean(axis=0)
            span = centroid - verts[-1]
            xr = centroid + refl * span
            fr = f(xr)
            track.offer(xr, fr)
            if track.used - start >= budget:
                return
            if fr > vals[0]:
                xe = centroid + expa * span
                fe = f(xe)
                track.offer(xe, fe)
                if fe > fr:
                    verts[-1], vals[-1] = xe, fe
                else:
                    verts[-1], vals[-1] = xr, fr
                if track.used - start >= budget:
                    return
            elif fr > vals[-2]:
                verts[-1], vals[-1] = xr, fr
            else:
                if fr > vals[-1]:
                    xc = centroid + contr * refl * span
                else:
                    xc = centroid - contr * span
                fc = f(xc)
                track.offer(xc, fc)
                if track.used - start >= budget:
                    return
                if fc > max(fr, vals[-1]):
                    verts[-1], vals[-1] = xc, fc
                else:
                    for i in range(1, len(verts)):
                        verts[i] = verts[0] + shrink * (verts[i] - verts[0])
                        fv = f(verts[i])
                        track.offer(verts[i], fv)
                        vals[i] = fv
                        if track.used - start >= budget:
                            return


def _run_simulated_annealing(f, rng, hi, budget, track):
    """Gaussian-proposal annealing with wrap-around into the box.

    Step size and temperature cool geometrically over a fixed 500-step
    cycle, after which the walk reheats from the best point this restart
    has seen.  The schedule depends only on the step index, never on the
    requested budget, so shorter runs are exact prefixes of longer runs
    with the same seed; one complete cycle is enough to refine a basin
    to roughly the final step size.
    """
    steps = _SA_CYCLE - 1
    sig_rate = (_SA_SIGMA[1] / _SA_SIGMA[0]) ** (1.0 / steps)
    t_rate = (_SA_TEMP[1] / _SA_TEMP[0]) ** (1.0 / steps)
    start = track.used
    x = rng.uniform(0.0, hi)
    fx = f(x)
    track.offer(x, fx)
    best_x, best_f = x, fx
    k = 0
    while track.used - start < budget:
        j = k % _SA_CYCLE
        if j == 0 and k:
            x, fx = best_x, best_f
        sigma = _SA_SIGMA[0] * sig_rate**j
        temp = _SA_TEMP[0] * t_rate**j
        cand = (x + rng.normal(0.0, sigma, hi.size)) % hi
        fc = f(cand)
        track.offer(cand, fc)
        if fc >= fx or rng.random() < math.exp((fc - fx) / temp):
            x, fx = cand, fc
        if fc > best_f:
            best_x, best_f = cand, fc
        k += 1


def _run_differential_evolution(fbatch, rng, hi, budget, track):
    """rand/1/bin with F = 0.7, CR = 0.9, trial points clipped to the box."""
    dim = hi.size
    pop_size = _DE_POP_PER_DIM * dim
    start = track.used
    pop = rng.uniform(0.0, hi, (pop_size, dim))
    first = min(pop_size, budget)
    vals = fbatch(pop[:first])
    track.offer_batch(pop[:first], vals)
    if first < pop_size:
        return
    while track.used - start < budget:
        m = min(pop_size, budget - (track.used - start))
        trials = np.empty((m, dim))
        for i in range(m):
            idx = rng.choice(pop_size - 1, 3, replace=False)
            idx += idx >= i  # never pick the parent
            mutant = pop[idx[0]] + _DE_WEIGHT * (pop[idx[1]] - pop[idx[2]])
            mutant = np.clip(mutant, 0.0, hi)
            mask = rng.random(dim) < _DE_CROSSOVER
            mask[rng.integers(dim)] = True
            trials[i] = np.where(mask, mutant, pop[i])
        trial_vals = fbatch(trials)
        track.offer_batch(trials, trial_vals)
        better = trial_vals > vals[:m]
        pop[:m][better] = trials[better]
        vals[:m][better] = trial_vals[better]


def _run_random_search(fbatch, rng, hi, budget, track):
    """Uniform sampling of the box, evaluated in chunks."""
    dim = hi.size
    start = track.used
    while track.used - start < budget:
        m = min(_RS_CHUNK, budget - (track.used - start))
        xs = rng.uniform(0.0, hi, (m, dim))
        track.offer_batch(xs, fbatch(xs))


_SEQUENTIAL = {0: _run_nelder_mead, 2: _run_simulated_annealing}
_BATCHED = {1: _run_differential_evolution, 3: _run_random_search}


def _gamma_box(model: LinearIsing, gamma_max) -> float:
    if gamma_max is not None:
        g = float(gamma_max)
        if not math.isfinite(g) or g <= 0.0:
            raise ValueError(f"gamma_max must be positive and finite, got {gamma_max!r}")
        return g
    period = gamma_period(model)
    # Unknown period: search two full 2*pi turns' worth of nothing -- just
    # a heuristic box; callers can widen via gamma_max.
    return period if period is not None else 2.0 * math.pi


def maximize(
    model: LinearIsing, p: int, spec: OptimizerSpec, gamma_max=None
) -> OptimizationResult:
    """Run one method over the angle box and return its best point.

    The box is [0, G)^p x [0, pi)^p with G the model's gamma period when
    known (pi for integer coefficients); the landscape is periodic in
    every coordinate, so the box covers all attainable values.  The
    reported best_value is re-evaluated through prob_opt at the returned
    angles.  Nelder-Mead starts inside the box but is not confined to it
    (reflection can step out); reported angles are then equivalent to an
    in-box point modulo the period.
    """
    if not isinstance(p, int) or p < 1:
        raise ValueError(f"layer count must be a positive integer, got {p!r}")
    method_id = _METHOD_IDS[spec.method]
    hi = np.array([_gamma_box(model, gamma_max)] * p + [math.pi] * p)
    track = _Tracker()
    if method_id in _SEQUENTIAL:
        runner = _SEQUENTIAL[method_id]
        objective = _scalar_objective(model, p)
    else:
        runner = _BATCHED[method_id]
        objective = _batch_objective(model, p)
    for restart in range(spec.restarts):
        rng = _make_rng(spec.seed, method_id, restart)
        runner(objective, rng, hi, spec.budget, track)
    best = track.best_x
    params = QaoaParams(tuple(best[:p]), tuple(best[p:]))
    return OptimizationResult(
        best_value=prob_opt(model, params),
        best_gammas=params.gammas,
        best_betas=params.betas,
        evaluations_used=track.used,
        method=spec.method,
    )


def portfolio_maximize(
    model: LinearIsing, p: int, specs, gamma_max=None
) -> OptimizationResult:
    """Best result across several specs; ties keep the earliest spec."""
    specs = tuple(specs)
    if not specs:
        raise ValueError("portfolio needs at least one OptimizerSpec")
    best = None
    total = 0
    for spec in specs:
        result = maximize(model, p, spec, gamma_max=gamma_max)
        total += result.evaluations_used
        if best is None or result.best_value > best.best_value:
            best = result
    return OptimizationResult(
        best_value=best.best_value,
        best_gammas=best.best_gammas,
        best_betas=best.best_betas,
        evaluations_used=total,
        method=best.method,
    )
