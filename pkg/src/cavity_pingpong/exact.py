"""Exact steady state of the driven Jaynes-Cummings master equation.

Hilbert space: atom (g, e) tensor Fock states |0>..|n_max>, atom-major, so the
basis index is ``atom * (n_max + 1) + n``. sigma = |g><e|.

Operators are vectorized by column stacking, vec(A rho B) = (B^T kron A) vec(rho).
The trace condition replaces the row of the (0, 0) element. Because that row
of L is minus the sum of the other diagonal rows, the same factorization also
solves L X = B on the traceless subspace (set the replaced entry to zero).

Diffusion and friction follow from the regression theorem:

    D = Re Tr(dF X),      L X = -dF rho_s,          dF = F_d - <F_d>
    G = Tr(F_d Z),        L Y = i[F_d, rho_s],  L Z = Y

with F_d = a s+ + a+ s = dH/dg. Y is d(rho_s)/dg.
"""
from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.integrate import solve_ivp

from .errors import CalibrationError, ConvergenceError, IllConditionedError
from .model import SystemParams, alpha0, coupling, coupling_gradient, nu_from_coupling

N_MAX_CAP = 64
TAIL_TOL = 1e-8
SHIFT_TOL = 1e-6
RESIDUAL_TOL = 1e-10


class PositivityWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class Operators:
    a: sp.csr_matrix
    sigma: sp.csr_matrix
    number: sp.csr_matrix
    excited: sp.csr_matrix
    sigma_z: sp.csr_matrix
    force: sp.csr_matrix
    identity: sp.csr_matrix


@functools.lru_cache(maxsize=32)
def _operators(n_max):
    N = n_max + 1
    a = sp.diags(np.sqrt(np.arange(1, N)), 1, shape=(N, N), dtype=complex)
    sm = sp.csr_matrix(np.array([[0, 1], [0, 0]], dtype=complex))
    A = sp.kron(sp.identity(2), a, format="csr")
    S = sp.kron(sm, sp.identity(N), format="csr")
    Ad, Sd = A.conj().T.tocsr(), S.conj().T.tocsr()
    return Operators(
        a=A,
        sigma=S,
        number=(Ad @ A).tocsr(),
        excited=(Sd @ S).tocsr(),
        sigma_z=(Sd @ S - S @ Sd).tocsr(),
        force=(A @ Sd + Ad @ S).tocsr(),
        identity=sp.identity(2 * N, dtype=complex, format="csr"),
    )


@dataclass(frozen=True)
class FockBasis:
    n_max: int

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")

    @property
    def dim(self):
        return 2 * (self.n_max + 1)

    @property
    def ops(self) -> Operators:
        return _operators(self.n_max)

    def index(self, atom, n):
        return atom * (self.n_max + 1) + n


def hamiltonian(basis: FockBasis, omega_a, omega_c, g, E):
    o = basis.ops
    Ad = o.a.conj().T
    H = (omega_a * o.excited + omega_c * o.number
         + g * (Ad @ o.sigma + o.a @ o.sigma.conj().T)
         + E * Ad + np.conj(E) * o.a)
    return sp.csr_matrix(H)


def build_hamiltonian(params: SystemParams, x, basis: FockBasis):
    return hamiltonian(basis, params.omega_a, params.omega_c, coupling(params, x), params.E)


@dataclass(frozen=True)
class Superoperator:
    matrix: sp.csc_matrix
    basis: FockBasis

    @property
    def dim(self):
        return self.basis.dim


def liouvillian(H, collapse):
    """-i[H, .] + sum_r rate (2 c . c+ - . c+c - c+c .), column stacked.

    ``collapse`` is a sequence of (rate, c) pairs.
    """
    d = H.shape[0]
    Id = sp.identity(d, dtype=complex, format="csr")
    H = sp.csr_matrix(H)
    L = -1j * (sp.kron(Id, H) - sp.kron(H.T, Id))
    for rate, c in collapse:
        if rate == 0:
            continue
        c = sp.csr_matrix(c)
        cdc = c.conj().T @ c
        L = L + rate * (2 * sp.kron(c.conj(), c) - sp.kron(Id, cdc) - sp.kron(cdc.T, Id))
    return sp.csc_matrix(L)


def build_liouvillian(params: SystemParams, x, basis: FockBasis, g=None) -> Superoperator:
    if g is None:
        g = coupling(params, x)
    H = hamiltonian(basis, params.omega_a, params.omega_c, g, params.E)
    o = basis.ops
    L = liouvillian(H, [(params.gamma, o.sigma), (params.kappa, o.a)])
    return Superoperator(L, basis)


def vec(M):
    return np.asarray(M.toarray() if sp.issparse(M) else M).reshape(-1, order="F")


def unvec(v, d):
    return np.asarray(v).reshape(d, d, order="F")


class BorderedSolver:
    """LU of L with its first row replaced by vec(I)^T."""

    def __init__(self, L: Superoperator):
        self.L = L
        d = L.dim
        M = L.matrix.tocsr()
        mask = np.ones(d * d)
        mask[0] = 0.0
        trace_row = sp.csr_matrix((np.ones(d), (np.zeros(d, int), np.arange(d) * (d + 1))),
                                  shape=(d * d, d * d))
        self.M = sp.csc_matrix(sp.diags(mask) @ M + trace_row)
        self.lu = spla.splu(self.M)
        self.d = d

    def _solve(self, b, target, tol, max_iter=4):
        x = self.lu.solve(b)
        scale = max(np.abs(b).max(), 1.0)
        for _ in range(max_iter):
            r = target(x)
            res = np.abs(r).max() / scale
            if res < tol:
                return x, res
            x = x + self.lu.solve(r)
        r = target(x)
        return x, np.abs(r).max() / scale

    def steady(self):
        d = self.d
        b = np.zeros(d * d, complex)
        b[0] = 1.0
        x, res = self._solve(b, lambda x: b - self.M @ x, RESIDUAL_TOL)
        lres = np.abs(self.L.matrix @ x).max()
        if lres > 1e2 * RESIDUAL_TOL:
            raise IllConditionedError(f"steady-state residual {lres:.2e}", residual=lres)
        return unvec(x, d), lres

    def traceless(self, B, tol=1e-9):
        """Solve L X = B with Tr X = 0; B is projected to be traceless first."""
        d = self.d
        B = np.asarray(B, dtype=complex)
        B = B - np.trace(B) / d * np.eye(d)
        b = vec(B)
        rhs = b.copy()
        rhs[0] = 0.0
        L = self.L.matrix
        x, _ = self._solve(rhs, lambda x: rhs - self.M @ x, tol)
        X = unvec(x, d)
        X = X - np.trace(X) / d * np.eye(d)
        x = vec(X)
        res = np.abs(L @ x - b).max() / max(np.abs(b).max(), 1e-300)
        if res > 1e-6:
            raise IllConditionedError(f"traceless solve residual {res:.2e}", residual=res)
        return X


@dataclass
class SteadyState:
    rho: np.ndarray
    L: Superoperator
    solver: BorderedSolver
    residual: float

    @property
    def basis(self):
        return self.L.basis

    def expect(self, op):
        return expectation(self.rho, op)

    def fock_populations(self):
        N = self.basis.n_max + 1
        p = np.real(np.diag(self.rho))
        return p[:N] + p[N:]

    def tail(self, levels=2):
        return float(self.fock_populations()[-levels:].sum())


def steady_state(L: Superoperator, check_positivity=True) -> SteadyState:
    solver = BorderedSolver(L)
    rho, res = solver.steady()
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    if check_positivity:
        lmin = np.linalg.eigvalsh(rho)[0]
        if lmin < -1e-8:
            warnings.warn(f"steady state has eigenvalue {lmin:.2e}", PositivityWarning)
    return SteadyState(rho, L, solver, res)


def expectation(rho, op) -> complex:
    rho = np.asarray(rho)
    if op.shape != rho.shape:
        raise ValueError(f"operator shape {op.shape} does not match state {rho.shape}")
    if sp.issparse(op):
        return complex((op.multiply(rho.T)).sum())
    return complex(np.einsum("ij,ji->", op, rho))


# --------------------------------------------------------------- cutoffs

def cutoff_seed(params: SystemParams, cap=N_MAX_CAP):
    """max(8, ceil(6 N0 max|1+nu|^2)), clipped to the cap.

    |1 + t nu/g^2|^2 is convex in t = g^2, so its maximum over the mode is at
    a node (1) or at the peak coupling g0.
    """
    N0 = abs(alpha0(params)) ** 2
    peak = max(1.0, abs(1 + nu_from_coupling(params, params.g0)) ** 2)
    return int(min(max(8, math.ceil(6 * N0 * peak)), cap))


@dataclass
class ExactSolution:
    params: SystemParams
    x: float
    state: SteadyState
    trajectory: List[tuple] = field(default_factory=list)
    converged: bool = True

    @property
    def n_max(self):
        return self.state.basis.n_max

    @property
    def rho(self):
        return self.state.rho

    @property
    def ops(self):
        return self.state.basis.ops

    @property
    def photon_number(self):
        return self.state.expect(self.ops.number).real

    @property
    def field(self):
        """<a>; the semiclassical amplitude alpha corresponds to -<a>."""
        return self.state.expect(self.ops.a)

    @property
    def excited_population(self):
        return self.state.expect(self.ops.excited).real

    @property
    def sigma_z(self):
        return self.state.expect(self.ops.sigma_z).real

    @property
    def force_expectation(self):
        return self.state.expect(self.ops.force).real

    def diffusion(self):
        return exact_diffusion(self.state.L, self.rho, self.ops.force, self.state.solver)

    def friction(self, sign=None):
        return exact_friction(self.state.L, self.rho, self.ops.force, self.state.solver, sign)

    def axial_friction(self, sign=None):
        """G (dg/dx)^2: the velocity damping rate along the mode axis."""
        return self.friction(sign) * coupling_gradient(self.params, self.x) ** 2


def _solve_at(params, x, n, g=None):
    return steady_state(build_liouvillian(params, x, FockBasis(n), g=g))


def solve_exact(params: SystemParams, x, n_max=None, cap=N_MAX_CAP, tail_tol=TAIL_TOL,
                shift_tol=SHIFT_TOL, g=None) -> ExactSolution:
    """Steady state with an adaptive photon cutoff.

    Starting from :func:`cutoff_seed`, the cutoff doubles (up to ``cap``) until
    the top two Fock levels hold less than ``tail_tol`` and <a+a> differs from
    a reference solve at three quarters of the cutoff by less than
    ``shift_tol`` relative. A fixed ``n_max`` skips the ladder.
    """
    if params.kappa <= 0:
        raise ValueError("a unique steady state needs kappa > 0")
    if n_max is not None:
        ss = _solve_at(params, x, n_max, g)
        return ExactSolution(params, float(x), ss, [(n_max, ss.tail(), None)],
                             ss.tail() < tail_tol)
    n = cutoff_seed(params, cap)
    trajectory = []
    while True:
        ss = _solve_at(params, x, n, g)
        tail = ss.tail()
        shift = None
        if tail < tail_tol:
            ref = _solve_at(params, x, max(4, (3 * n) // 4), g)
            num = ss.expect(ss.basis.ops.number).real
            nref = ref.expect(ref.basis.ops.number).real
            # absolute tolerance of shift_tol * 1e-6 for nearly empty modes
            shift = abs(num - nref) / max(abs(num), 1e-6)
        trajectory.append((n, tail, shift))
        if tail < tail_tol and shift is not None and shift < shift_tol:
            return ExactSolution(params, float(x), ss, trajectory, True)
        if n >= cap:
            raise ConvergenceError(
                f"cutoff not converged at n_max={n} (tail {tail:.2e}, shift {shift})",
                trajectory)
        n = min(2 * n, cap)


# ------------------------------------------------------ diffusion/friction

def exact_diffusion(L: Superoperator, rho_s, F_d=None, solver: Optional[BorderedSolver] = None):
    """One-sided force correlation integral, Re Tr(dF X) with L X = -dF rho_s."""
    if F_d is None:
        F_d = L.basis.ops.force
    solver = solver or BorderedSolver(L)
    F = F_d.toarray() if sp.issparse(F_d) else np.asarray(F_d)
    d = F.shape[0]
    dF = F - expectation(rho_s, F).real * np.eye(d)
    X = solver.traceless(-(dF @ rho_s))
    return float(np.real(np.trace(dF @ X)))


def steady_state_derivative(L: Superoperator, rho_s, F_d=None,
                            solver: Optional[BorderedSolver] = None):
    """d(rho_s)/dg from L Y = i[F_d, rho_s]."""
    if F_d is None:
        F_d = L.basis.ops.force
    solver = solver or BorderedSolver(L)
    F = F_d.toarray() if sp.issparse(F_d) else np.asarray(F_d)
    return solver.traceless(1j * (F @ rho_s - rho_s @ F))


def raw_exact_friction(L, rho_s, F_d=None, solver=None):
    if F_d is None:
        F_d = L.basis.ops.force
    solver = solver or BorderedSolver(L)
    F = F_d.toarray() if sp.issparse(F_d) else np.asarray(F_d)
    Y = steady_state_derivative(L, rho_s, F, solver)
    Z = solver.traceless(Y)
    return float(np.real(np.trace(F @ Z)))


CALIBRATION = dict(gamma=1.0, kappa=0.01, omega_a=10.0, omega_c=0.0, g=0.3, N0=0.01)


@functools.lru_cache(maxsize=1)
def friction_sign():
    """+1 or -1 so that exact friction agrees in sign with the field friction
    in a good-cavity, weakly saturated regime.
    """
    from .kinetics import friction_field, scaled_mode_rates
    from .states import bounced1

    c = CALIBRATION
    params = SystemParams.from_photon_number(c["N0"], c["gamma"], c["kappa"], c["omega_a"],
                                             c["omega_c"], g0=c["g"])
    sol = solve_exact(params, 0.0)
    raw = raw_exact_friction(sol.state.L, sol.rho, sol.ops.force, sol.state.solver)
    st = bounced1(params, 0.0)
    ref = friction_field(params, 0.0, st, scaled_mode_rates(params, 0.0, st.s))
    if abs(raw) < 1e-12 or abs(ref) < 1e-12:
        raise CalibrationError(f"friction sign calibration ambiguous: exact {raw}, field {ref}")
    return 1 if np.sign(raw) == np.sign(ref) else -1


def exact_friction(L: Superoperator, rho_s, F_d=None, solver=None, sign=None):
    """Friction coefficient with gradients scaled out; positive cools."""
    if sign is None:
        sign = friction_sign()
    return sign * raw_exact_friction(L, rho_s, F_d, solver)


def diffusion_time_domain(L: Superoperator, rho_s, F_d=None, tol=1e-12, t_chunk=None):
    """Same integral as :func:`exact_diffusion` by propagating exp(L t) dF rho_s.

    Integrates chunk by chunk with DOP853 until both the integrand and the
    propagated operator fall below ``tol``. Meant as an independent check on
    small cutoffs.
    """
    if F_d is None:
        F_d = L.basis.ops.force
    F = F_d.toarray() if sp.issparse(F_d) else np.asarray(F_d)
    d = F.shape[0]
    dF = F - expectation(rho_s, F).real * np.eye(d)
    Lm = L.matrix.tocsr()
    wF = vec(dF.T)  # Tr(dF Y) = vec(dF^T) . vec(Y)

    def rhs(t, y):
        v = y[:-1]
        dv = Lm @ v
        return np.concatenate([dv, [np.real(wF @ v)]])

    y = np.concatenate([vec(dF @ rho_s), [0.0]]).astype(complex)
    if t_chunk is None:
        rate = min(abs(x) for x in L.matrix.diagonal() if abs(x) > 0)
        t_chunk = 5.0 / max(rate, 1e-3)
    t = 0.0
    for _ in range(10000):
        sol = solve_ivp(rhs, (t, t + t_chunk), y, method="DOP853", rtol=1e-11, atol=1e-14)
        y = sol.y[:, -1]
        t += t_chunk
        integrand = abs(np.real(wF @ y[:-1]))
        if integrand < tol and np.abs(y[:-1]).max() < tol:
            break
    return float(np.real(y[-1]))
