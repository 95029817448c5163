"""Heisenberg XYZ chain Hamiltonians and closed-form spectra for two and three sites.

The Hamiltonian is

    H = 1/2 sum_bonds [J_x X_i X_j + J_y Y_i Y_j + J_z Z_i Z_j + B (Z_i + Z_j)]

with ``|0>`` the ``Z = +1`` eigenstate. Two sites form a single open bond;
three or more sites default to a periodic ring.

The closed-form eigenvectors below are written in the labeling where ``|0>``
is spin down, i.e. they are eigenvectors of ``H(-B)`` in our basis.
:func:`complement_bits` converts between the two labelings. Energies need no
conversion because a global spin flip maps ``H(B)`` to ``H(-B)``.
"""

import enum
import functools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .linalg import MAX_QUBITS, hermitian_eig, kron

IDENTITY = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


class Boundary(str, enum.Enum):
    OPEN = "open"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class ChainParams:
    """Physical parameters of an ``n_sites`` XYZ chain (k_B = 1).

    ``boundary`` defaults to open for two sites and periodic otherwise.
    Use :meth:`from_j_gamma` to enter the mean coupling and anisotropy.
    """

    n_sites: int
    j_x: float
    j_y: float
    j_z: float = 0.0
    b_field: float = 0.0
    boundary: Boundary = field(default=None)

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise ValueError(f"n_sites must be an integer >= 2, got {self.n_sites!r}")
        if self.n_sites > MAX_QUBITS:
            raise ValueError(f"n_sites > {MAX_QUBITS} is not supported")
        for name in ("j_x", "j_y", "j_z", "b_field"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "n_sites", int(self.n_sites))
        boundary = self.boundary
        if boundary is None:
            boundary = Boundary.OPEN if self.n_sites == 2 else Boundary.PERIODIC
        boundary = Boundary(boundary)
        if self.n_sites == 2 and boundary is Boundary.PERIODIC:
            raise ValueError(
                "a periodic two-site chain would count its single bond twice; use open"
            )
        object.__setattr__(self, "boundary", boundary)

    @classmethod
    def from_j_gamma(cls, n_sites, j, gamma, j_z=0.0, b_field=0.0, boundary=None):
        """Build from ``J = (J_x + J_y)/2`` and ``gamma = (J_x - J_y)/(J_x + J_y)``."""
        return cls(n_sites, j * (1 + gamma), j * (1 - gamma), j_z, b_field, boundary)

    @property
    def j_mean(self):
        return 0.5 * (self.j_x + self.j_y)

    @property
    def gamma(self):
        s = self.j_x + self.j_y
        if s == 0:
            raise ZeroDivisionError("gamma is undefined when j_x + j_y = 0")
        return (self.j_x - self.j_y) / s

    @property
    def j_gamma(self):
        """The product ``J * gamma = (J_x - J_y)/2``, defined for every coupling."""
        return 0.5 * (self.j_x - self.j_y)

    def evolve(self, *, j=None, gamma=None, j_z=None, b_field=None):
        """Copy with some parameters replaced; ``j``/``gamma`` keep the other fixed."""
        p = self
        if j is not None or gamma is not None:
            new_j = self.j_mean if j is None else j
            new_gamma = self.gamma if gamma is None else gamma
            p = replace(p, j_x=new_j * (1 + new_gamma), j_y=new_j * (1 - new_gamma))
        changes = {}
        if j_z is not None:
            changes["j_z"] = j_z
        if b_field is not None:
            changes["b_field"] = b_field
        return replace(p, **changes) if changes else p


def site_operator(op, site, n_sites):
    """``op`` acting on ``site`` of an ``n_sites`` register (identity elsewhere)."""
    out = np.ones((1, 1), dtype=np.complex128)
    for k in range(n_sites):
        out = kron(out, op if k == site else IDENTITY)
    return out


def bonds(n_sites, boundary):
    pairs = [(i, i + 1) for i in range(n_sites - 1)]
    if Boundary(boundary) is Boundary.PERIODIC:
        pairs.append((n_sites - 1, 0))
    return pairs


@functools.lru_cache(maxsize=32)
def _bond_terms(n_sites, boundary):
    """Summed XX, YY, ZZ and field operators over all bonds, as read-only real arrays."""
    dim = 2**n_sites
    xx = np.zeros((dim, dim), dtype=np.complex128)
    yy = np.zeros_like(xx)
    zz = np.zeros_like(xx)
    field_ = np.zeros_like(xx)
    for i, j in bonds(n_sites, boundary):
        xx += site_operator(SIGMA_X, i, n_sites) @ site_operator(SIGMA_X, j, n_sites)
        yy += site_operator(SIGMA_Y, i, n_sites) @ site_operator(SIGMA_Y, j, n_sites)
        zz += site_operator(SIGMA_Z, i, n_sites) @ site_operator(SIGMA_Z, j, n_sites)
        field_ += site_operator(SIGMA_Z, i, n_sites) + site_operator(SIGMA_Z, j, n_sites)
    terms = []
    for t in (xx, yy, zz, field_):
        assert not np.any(t.imag)
        r = t.real.copy()
        r.setflags(write=False)
        terms.append(r)
    return tuple(terms)


def build_hamiltonian(p: ChainParams) -> np.ndarray:
    """Dense Hamiltonian of the chain in the standard basis (complex dtype, real entries)."""
    xx, yy, zz, field_ = _bond_terms(p.n_sites, p.boundary)
    h = 0.5 * (p.j_x * xx + p.j_y * yy + p.j_z * zz + p.b_field * field_)
    return h.astype(np.complex128)


def cyclic_shift(state_index, n_qubits):
    """Cyclic right shift of a basis label: ``|b0 b1 ... b_{N-1}> -> |b_{N-1} b0 ...>``."""
    if not 0 <= state_index < 2**n_qubits:
        raise ValueError(f"basis label {state_index} out of range for {n_qubits} qubits")
    last = state_index & 1
    return (state_index >> 1) | (last << (n_qubits - 1))


def shift_operator(n_qubits):
    """Permutation matrix of :func:`cyclic_shift`."""
    dim = 2**n_qubits
    m = np.zeros((dim, dim))
    for i in range(dim):
        m[cyclic_shift(i, n_qubits), i] = 1.0
    return m


def complement_bits(vec):
    """Apply X to every qubit: amplitude of ``|b>`` moves to ``|~b>``."""
    return np.asarray(vec)[::-1].copy()


def basis_state(label, n_qubits):
    """State vector of a bit-string label such as ``"110"``."""
    if len(label) != n_qubits:
        raise ValueError(f"label {label!r} does not have {n_qubits} bits")
    v = np.zeros(2**n_qubits, dtype=np.complex128)
    v[int(label, 2)] = 1.0
    return v


def _orbit_sum(label, n_qubits):
    """``sum_n shift^n |label>`` over n = 0..N-1 (with repetition for symmetric labels)."""
    v = np.zeros(2**n_qubits, dtype=np.complex128)
    idx = int(label, 2)
    for _ in range(n_qubits):
        v[idx] += 1.0
        idx = cyclic_shift(idx, n_qubits)
    return v


# Relative size of a closed-form normalization below which the printed vector is
# replaced by a numerically orthonormalized one.
_SINGULAR_NORM = 1e-24


def _hypot_minus(eta, x, rest):
    """``eta - x`` where ``eta = sqrt(x**2 + rest)``, without cancellation."""
    if x <= 0.0:
        return eta - x
    return rest / (eta + x)


def _block_vector(h, basis, energy):
    """Eigenvector of ``h`` restricted to span(basis) whose eigenvalue is nearest ``energy``."""
    q = np.stack(basis, axis=1)
    q, _ = np.linalg.qr(q)
    block = q.conj().T @ h @ q
    block = 0.5 * (block + block.conj().T)
    spec = hermitian_eig(block)
    k = int(np.argmin(np.abs(spec.eigenvalues - energy)))
    return q @ spec.eigenvectors[:, k]


@dataclass(frozen=True)
class AnalyticTwoQubitSpectrum:
    """Closed-form eigensystem of the two-site chain.

    Energies are ``e_psi_pm = -J_z/2 +/- J`` and ``e_sigma_pm = J_z/2 +/- eta``
    with ``eta = sqrt(B**2 + (J gamma)**2)``. ``states`` holds the printed
    eigenvectors (spin-down ``|0>`` labeling; see :func:`complement_bits`).
    """

    e_psi_plus: float
    e_psi_minus: float
    e_sigma_plus: float
    e_sigma_minus: float
    eta: float
    states: dict = field(repr=False, compare=False)

    @property
    def energies(self):
        return np.array([self.e_psi_plus, self.e_psi_minus, self.e_sigma_plus, self.e_sigma_minus])


def two_qubit_spectrum(p: ChainParams) -> AnalyticTwoQubitSpectrum:
    if p.n_sites != 2:
        raise ValueError("two_qubit_spectrum needs n_sites = 2")
    j, jg, jz, b = p.j_mean, p.j_gamma, p.j_z, p.b_field
    eta = math.hypot(b, jg)
    r2 = math.sqrt(0.5)
    states = {
        "psi_plus": r2 * (basis_state("01", 2) + basis_state("10", 2)),
        "psi_minus": r2 * (basis_state("01", 2) - basis_state("10", 2)),
    }
    energies = {"sigma_plus": 0.5 * jz + eta, "sigma_minus": 0.5 * jz - eta}
    for name, sign in (("sigma_plus", 1.0), ("sigma_minus", -1.0)):
        q = _hypot_minus(eta, sign * b, jg * jg)
        norm2 = 2.0 * eta * q
        if norm2 > _SINGULAR_NORM * max(1.0, eta * eta):
            v = q * basis_state("00", 2) + sign * jg * basis_state("11", 2)
            states[name] = v / math.sqrt(norm2)
        else:
            h = build_hamiltonian(replace(p, b_field=-b))
            basis = [basis_state("00", 2), basis_state("11", 2)]
            states[name] = _block_vector(h, basis, energies[name])
    return AnalyticTwoQubitSpectrum(
        e_psi_plus=-0.5 * jz + j,
        e_psi_minus=-0.5 * jz - j,
        e_sigma_plus=energies["sigma_plus"],
        e_sigma_minus=energies["sigma_minus"],
        eta=eta,
        states=states,
    )


@dataclass(frozen=True)
class AnalyticThreeQubitSpectrum:
    """Closed-form eigensystem of the three-site ring, in printed order E1..E8.

    ``vectors[:, k]`` is the state paired with ``energies[k]``, written in the
    spin-down ``|0>`` labeling.
    """

    energies: np.ndarray = field(repr=False)
    vectors: np.ndarray = field(repr=False)
    eta_plus: float = 0.0
    eta_minus: float = 0.0
    singular: tuple = ()


def three_qubit_spectrum(p: ChainParams) -> AnalyticThreeQubitSpectrum:
    if p.n_sites != 3:
        raise ValueError("three_qubit_spectrum needs n_sites = 3")
    j, jg, jz, b = p.j_mean, p.j_gamma, p.j_z, p.b_field
    d_minus = jz - 2 * b - j
    d_plus = jz + 2 * b - j
    eta_minus = math.sqrt(d_minus**2 + 3 * jg**2)
    eta_plus = math.sqrt(d_plus**2 + 3 * jg**2)
    r3 = 1 / math.sqrt(3)
    s = lambda label: basis_state(label, 3)  # noqa: E731

    energies = [
        -j - 0.5 * jz + b,
        -j - 0.5 * jz + b,
        j + 0.5 * jz - b + eta_minus,
        j + 0.5 * jz - b - eta_minus,
        -j - 0.5 * jz - b,
        -j - 0.5 * jz - b,
        j + 0.5 * jz + b + eta_plus,
        j + 0.5 * jz + b - eta_plus,
    ]
    vectors = []
    for sign in (1.0, -1.0):
        vectors.append(
            sign * 0.5 * (1 - sign * r3) * s("110") + r3 * s("101")
            - sign * 0.5 * (1 + sign * r3) * s("011")
        )
    singular = []
    flipped = None
    blocks = [
        (2, d_minus, eta_minus, "000", "110"),
        (6, d_plus, eta_plus, "111", "010"),
    ]
    block_vectors = {}
    for start, d, eta, anchor, seed in blocks:
        orbit = _orbit_sum(seed, 3)
        for offset, sign in ((0, 1.0), (1, -1.0)):
            k = start + offset
            q = _hypot_minus(eta, -sign * d, 3 * jg**2)
            norm2 = 2 * eta * q
            if norm2 > _SINGULAR_NORM * max(1.0, eta * eta):
                v = sign * q * s(anchor) + jg * orbit
                block_vectors[k] = v / math.sqrt(norm2)
            else:
                if flipped is None:
                    flipped = build_hamiltonian(replace(p, b_field=-b))
                block_vectors[k] = _block_vector(flipped, [s(anchor), orbit * r3], energies[k])
                singular.append(k)
    vectors += [block_vectors[2], block_vectors[3]]
    for sign in (1.0, -1.0):
        vectors.append(
            sign * 0.5 * (1 - sign * r3) * s("010") + r3 * s("100")
            - sign * 0.5 * (1 + sign * r3) * s("001")
        )
    vectors += [block_vectors[6], block_vectors[7]]
    return AnalyticThreeQubitSpectrum(
        energies=np.array(energies),
        vectors=np.stack(vectors, axis=1),
        eta_plus=eta_plus,
        eta_minus=eta_minus,
        singular=tuple(singular),
    )


LABEL_AS_PRINTED = "as printed"
LABEL_COMPLEMENTED = "complement all bits (|0> is spin down; equivalently B -> -B)"


def reconcile_three_qubit(p: ChainParams, tol=1e-10):
    """Compare the closed-form three-site eigensystem with exact diagonalization.

    Returns a dict with the brute-force and closed-form energy lists, the
    largest sorted-energy mismatch, and per-state residuals
    ``||H v - E v||`` under both labelings (as printed, and with every bit
    complemented). ``labelings`` lists every labeling under which all eight
    pairs are eigenpairs within ``tol``; ``convention`` is the first of them,
    or ``None``.
    """
    h = build_hamiltonian(p)
    numeric = hermitian_eig(h).eigenvalues
    ana = three_qubit_spectrum(p)
    energy_dev = float(np.max(np.abs(np.sort(ana.energies) - numeric)))
    literal, mapped = [], []
    for k in range(8):
        v = ana.vectors[:, k]
        e = ana.energies[k]
        literal.append(float(np.linalg.norm(h @ v - e * v)))
        w = complement_bits(v)
        mapped.append(float(np.linalg.norm(h @ w - e * w)))
    labelings = []
    if energy_dev <= tol:
        if max(literal) <= tol:
            labelings.append(LABEL_AS_PRINTED)
        if max(mapped) <= tol:
            labelings.append(LABEL_COMPLEMENTED)
    convention = labelings[0] if labelings else None
    return {
        "numeric_energies": [float(x) for x in numeric],
        "analytic_energies": [float(x) for x in ana.energies],
        "energy_max_dev": energy_dev,
        "residual_as_printed": literal,
        "residual_complemented": mapped,
        "convention": convention,
        "labelings": labelings,
        "singular_vectors": list(ana.singular),
    }
