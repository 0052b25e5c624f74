"""Multi-start ascent for sup-norms of polynomials on l_p balls.

Points are written z_j = exp(u_j + i theta_j), so log-moduli u and phases
theta are unconstrained apart from the sphere condition. With W the matrix of
weighted monomials c_a z^a over a batch of points, the gradient of log|P|
needs only G_j = z_j dP/dz_j = (W @ E)_j:

    d log|P| / d u_j     =  Re(conj(P) G_j) / |P|^2
    d log|P| / d theta_j = -Im(conj(P) G_j) / |P|^2

For p = inf the moduli stay at 1 (torus); for finite p the u-gradient is
projected onto the tangent space of sum exp(p u) = 1 and the log-moduli are
then retracted onto the sphere by subtracting logsumexp(p u)/p.

The evaluation stream for a given seed does not depend on the budget: the
budget only decides where the stream is cut. Hence a larger budget sees a
superset of points and the best value found is monotone in the budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .multiindex import BallSpec, SparsePolynomial

LOG_FLOOR = -60.0
MIN_STEP = 1e-10


def start_count(n: int) -> int:
    return max(32, 4 * n)


@dataclass
class AscentResult:
    best_value: float
    best_point: np.ndarray  # complex, in the active variables
    evaluations: int


class _Kernel:
    def __init__(self, E: np.ndarray, c: np.ndarray):
        self.E = E
        self.c = c
        self.Ei = E.astype(np.intp)
        self.top = self.Ei.max(axis=0) if len(E) else np.zeros(E.shape[1], dtype=np.intp)
        self.cols = [j for j in range(E.shape[1]) if self.top[j] > 0]

    def monomials(self, u: np.ndarray, theta: np.ndarray) -> np.ndarray:
        # power tables per variable, gathered by exponent; cheaper than a complex exp per term
        with np.errstate(under="ignore"):
            z = np.exp(u + 1j * theta)
        mono = None
        for j in self.cols:
            table = np.cumprod(
                np.concatenate([np.ones((z.shape[0], 1)), np.repeat(z[:, j : j + 1], self.top[j], axis=1)], axis=1),
                axis=1,
            )
            g = table[:, self.Ei[:, j]]
            mono = g if mono is None else mono * g
        if mono is None:
            mono = np.ones((z.shape[0], len(self.c)), dtype=complex)
        return mono

    def values(self, u: np.ndarray, theta: np.ndarray) -> np.ndarray:
        return self.monomials(u, theta) @ self.c

    def values_and_grads(self, u, theta):
        W = self.monomials(u, theta) * self.c
        P = W.sum(axis=1)
        G = W @ self.E
        mod2 = np.maximum(np.abs(P) ** 2, 1e-300)[:, None]
        prod = np.conj(P)[:, None] * G
        return P, prod.real / mod2, -prod.imag / mod2


def _logsumexp_rows(x: np.ndarray) -> np.ndarray:
    top = x.max(axis=1, keepdims=True)
    return top + np.log(np.exp(x - top).sum(axis=1, keepdims=True))


def _tangent(g: np.ndarray, u: np.ndarray, p: float) -> np.ndarray:
    # drop the component along the sphere normal exp(p u); the retraction's
    # uniform shift alone leaves an oblique direction that need not ascend
    w = np.exp(p * (u - u.max(axis=1, keepdims=True)))
    return g - (np.sum(g * w, axis=1, keepdims=True) / np.sum(w * w, axis=1, keepdims=True)) * w


def _retract(u: np.ndarray, p: float, log_radius: float) -> np.ndarray:
    u = np.maximum(u, LOG_FLOOR)
    return u - _logsumexp_rows(p * u) / p + log_radius


class _Sampler:
    """Seeded generator of boundary points in the active variables."""

    def __init__(self, k: int, ball: BallSpec, seed: int, phases: bool, log_radius: float):
        self.k = k
        self.ball = ball
        self.rng = np.random.default_rng(seed)
        self.phases = phases
        self.log_radius = log_radius

    def random(self, count: int) -> tuple[np.ndarray, np.ndarray]:
        k, ball = self.k, self.ball
        theta = (
            self.rng.uniform(0.0, 2.0 * np.pi, size=(count, k))
            if self.phases
            else np.zeros((count, k))
        )
        if ball.is_polydisc:
            u = np.full((count, k), self.log_radius)
        else:
            # |z_j|^p ~ Dirichlet(2/p): the cone measure of the complex l_p sphere
            t = self.rng.dirichlet(np.full(k, 2.0 / ball.p), size=count)
            with np.errstate(divide="ignore"):
                u = _retract(np.log(t) / ball.p, ball.p, self.log_radius)
        return u, theta

    def initial(self, count: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
        """Diagonal point, coordinate vertices (finite p), then scrambled Sobol points."""
        k, ball = self.k, self.ball
        us, thetas = [], []
        us.append(np.zeros(k))
        thetas.append(np.zeros(k))
        if not ball.is_polydisc and k > 1:
            for j in range(k):
                v = np.full(k, LOG_FLOOR)
                v[j] = 0.0
                us.append(v)
                thetas.append(np.zeros(k))
        rest = max(count - len(us), 0)
        if rest:
            dim = 2 * k if self.phases else k
            m = max(0, math.ceil(math.log2(rest)))
            sob = qmc.Sobol(d=dim, scramble=True, seed=seed).random_base2(m)[:rest]
            sob = np.clip(sob, 1e-12, 1 - 1e-12)
            if ball.is_polydisc:
                u_part = np.zeros((rest, k))
            else:
                u_part = np.log(-np.log(sob[:, :k])) / ball.p
            th_part = 2.0 * np.pi * sob[:, k:] if self.phases else np.zeros((rest, k))
            us.extend(u_part)
            thetas.extend(th_part)
        u = np.array(us[:count]) if count else np.zeros((0, k))
        theta = np.array(thetas[:count]) if count else np.zeros((0, k))
        if ball.is_polydisc:
            u = np.full_like(u, self.log_radius)
        else:
            u = _retract(u, ball.p, self.log_radius)
        return u, theta


def maximize_modulus(
    E: np.ndarray,
    c: np.ndarray,
    ball: BallSpec,
    budget: int,
    seed: int,
    *,
    starts: int | None = None,
    phases: bool = True,
    radius: float = 1.0,
    random_per_round: int | None = None,
) -> AscentResult:
    """Largest |sum c_a z^a| found on the sphere of ``radius`` in the k = E.shape[1]
    active variables, spending at most ``budget`` polynomial evaluations.

    ``phases=False`` restricts to non-negative real points (used for
    polynomials with non-negative coefficients).
    """
    k = E.shape[1]
    if budget < 1:
        raise ValueError("budget must be >= 1")
    kern = _Kernel(E, c)
    log_radius = math.log(radius)
    S = starts if starts is not None else start_count(k)
    R = random_per_round if random_per_round is not None else 8 * S
    sampler = _Sampler(k, ball, seed, phases, log_radius)
    deg = max(float(E.sum(axis=1).max(initial=1.0)), 1.0)
    move_u = not ball.is_polydisc and k > 1

    best_val = -1.0
    best_pt = np.zeros(k, dtype=complex)
    used = 0

    def consider(vals: np.ndarray, u: np.ndarray, theta: np.ndarray) -> bool:
        nonlocal best_val, best_pt, used
        take = min(len(vals), budget - used)
        if take <= 0:
            return False
        mods = np.abs(vals[:take])
        i = int(np.argmax(mods))
        if mods[i] > best_val:
            best_val = float(mods[i])
            best_pt = np.exp(u[i] + 1j * theta[i])
        used += take
        return used < budget

    u, theta = sampler.initial(S, seed)
    P, gu, gt = kern.values_and_grads(u, theta)
    if not consider(P, u, theta):
        return _finish(best_val, best_pt, used, ball, radius)
    cur = np.log(np.maximum(np.abs(P), 1e-300))
    step = np.full(S, 0.5 / deg)

    while True:
        # one ascent trial per start
        if move_u:
            u_try = _retract(u + step[:, None] * _tangent(gu, u, ball.p), ball.p, log_radius)
        else:
            u_try = u
        t_try = theta + step[:, None] * gt if phases else theta
        P_try, gu_try, gt_try = kern.values_and_grads(u_try, t_try)
        if not consider(P_try, u_try, t_try):
            break
        new = np.log(np.maximum(np.abs(P_try), 1e-300))
        ok = new > cur
        u = np.where(ok[:, None], u_try, u)
        theta = np.where(ok[:, None], t_try, theta)
        gu = np.where(ok[:, None], gu_try, gu)
        gt = np.where(ok[:, None], gt_try, gt)
        cur = np.where(ok, new, cur)
        step = np.where(ok, step * 1.5, step * 0.5)

        # converged starts restart from fresh random points
        dead = step < MIN_STEP
        if dead.any():
            nu, nt = sampler.random(int(dead.sum()))
            Pn, gun, gtn = kern.values_and_grads(nu, nt)
            if not consider(Pn, nu, nt):
                break
            u[dead], theta[dead], gu[dead], gt[dead] = nu, nt, gun, gtn
            cur[dead] = np.log(np.maximum(np.abs(Pn), 1e-300))
            step[dead] = 0.5 / deg

        # plain random sampling
        if R:
            ru, rt = sampler.random(R)
            if not consider(kern.values(ru, rt), ru, rt):
                break
    return _finish(best_val, best_pt, used, ball, radius)


def _finish(val, pt, used, ball, radius) -> AscentResult:
    # keep the reported point exactly inside the closed ball
    nrm = ball.norm(pt)
    if nrm > radius:
        pt = pt * (radius / nrm)
    return AscentResult(max(val, 0.0), pt, used)


def majorant_sup(
    poly_abs: SparsePolynomial, ball: BallSpec, r: float, budget: int = 4000, seed: int = 0
) -> float:
    """sup over the ball of radius r of sum c_a |z^a|, for c_a >= 0.

    On the polydisc this is the value at (r, ..., r). For finite p the sup is
    attained at a non-negative real point of the sphere, which a multi-start
    ascent over the non-negative orthant locates.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"r must lie in [0, 1], got {r}")
    coeffs = [c for _, c in poly_abs.items()]
    if any(c.imag != 0.0 or c.real < 0.0 for c in coeffs):
        raise ValueError("majorant_sup needs non-negative real coefficients")
    if poly_abs.is_zero():
        return 0.0
    E, c = poly_abs.arrays()
    if r == 0.0:
        return float(c.real[E.sum(axis=1) == 0].sum())
    if ball.is_polydisc:
        deg = E.sum(axis=1)
        return float(np.sum(c.real * r**deg))
    active = poly_abs.active_variables()
    if len(active) == 0:
        return float(c.real.sum())
    if len(active) == 1:
        # l_p ball projects onto the disc in any single coordinate
        deg = E[:, active[0]]
        return float(np.sum(c.real * r**deg))
    sub = E[:, list(active)]
    k = len(active)
    res = maximize_modulus(
        sub, c, BallSpec(k, ball.p), budget, seed,
        starts=max(8, 2 * k), phases=False, radius=r, random_per_round=0,
    )
    rng = np.random.default_rng(seed)
    starts = [np.abs(res.best_point), np.full(k, r * k ** (-1.0 / ball.p))]
    starts += list(r * rng.dirichlet(np.ones(k), size=POLISH_STARTS) ** (1.0 / ball.p))
    best = res.best_value
    for x0 in starts:
        best = max(best, _polish(sub, c.real, ball.p, r, x0))
    return best


POLISH_STARTS = 2


def _polish(E: np.ndarray, c: np.ndarray, p: float, r: float, x0: np.ndarray) -> float:
    """Local SLSQP refinement of sum c x^E on {x >= 0, sum x^p = r^p}."""

    def value(x):
        return float(c @ np.prod(x**E, axis=1))

    def neg(x):
        x = np.maximum(x, 0.0)
        mono = c * np.prod(x**E, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            grad = np.where(x > 0, (mono @ E) / x, 0.0)
        return -float(mono.sum()), -grad

    cons = {
        "type": "eq",
        "fun": lambda x: np.sum(np.maximum(x, 0.0) ** p) - r**p,
        "jac": lambda x: p * np.maximum(x, 0.0) ** (p - 1.0),
    }
    out = minimize(neg, x0, jac=True, method="SLSQP", bounds=[(0.0, r)] * len(x0),
                   constraints=[cons], options={"ftol": 1e-15, "maxiter": 200})
    x = np.maximum(out.x, 0.0)
    nrm = np.sum(x**p) ** (1.0 / p)
    if not np.isfinite(nrm) or nrm == 0.0:
        return 0.0
    # on the sphere exactly; the objective is increasing in every coordinate
    return value(x * (r / nrm))
