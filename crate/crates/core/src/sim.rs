//! Dense statevector simulation and the equivalence oracle for routed
//! circuits.
//!
//! Qubit 0 is the least-significant bit of the amplitude index. For a
//! two-qubit gate on `(a, b)` the 4×4 matrix is written in the basis
//! `|a b⟩`, so local index `2·bit(a) + bit(b)`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind, Param, Qubit};
use crate::router::RoutingResult;

/// Largest register the statevector simulator accepts.
pub const MAX_QUBITS: usize = 14;
/// Largest register for which a full unitary is built.
pub const MAX_UNITARY_QUBITS: usize = 8;
/// Default tolerance for fidelity and mediator return.
pub const TOLERANCE: f64 = 1e-10;

pub type Bindings = BTreeMap<String, f64>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SimError {
    #[error("register of {n} qubits exceeds the simulator cap of {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error("parameter `{0}` has no binding")]
    UnboundParameter(String),
    #[error("HEIS gate without an angle")]
    MissingAngle,
    #[error("amplitude vector of length {0} is not a normalized power of two")]
    BadAmplitudes(usize),
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Debug, PartialEq)]
pub enum GateMatrix {
    One([[Complex64; 2]; 2]),
    Two([[Complex64; 4]; 4]),
}

impl GateMatrix {
    pub fn dim(&self) -> usize {
        match self {
            GateMatrix::One(_) => 2,
            GateMatrix::Two(_) => 4,
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        match self {
            GateMatrix::One(m) => m[r][c],
            GateMatrix::Two(m) => m[r][c],
        }
    }

    /// Largest deviation of `U·U†` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                let mut s = ZERO;
                for k in 0..d {
                    s += self.get(r, k) * self.get(c, k).conj();
                }
                let target = if r == c { ONE } else { ZERO };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }
}

fn mul4(a: &[[Complex64; 4]; 4], b: &[[Complex64; 4]; 4]) -> [[Complex64; 4]; 4] {
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            for k in 0..4 {
                out[r][c] += a[r][k] * b[k][c];
            }
        }
    }
    out
}

fn kron2(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 4]; 4] {
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = a[r >> 1][c >> 1] * b[r & 1][c & 1];
        }
    }
    out
}

fn one_qubit(kind: GateKind) -> [[Complex64; 2]; 2] {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    match kind {
        GateKind::H => [[h, h], [h, -h]],
        GateKind::S => [[ONE, ZERO], [ZERO, I]],
        GateKind::T => [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, PI / 4.0)]],
        GateKind::X => [[ZERO, ONE], [ONE, ZERO]],
        GateKind::Z => [[ONE, ZERO], [ZERO, -ONE]],
        _ => unreachable!("{kind:?} is not a single-qubit gate"),
    }
}

fn swap4() -> [[Complex64; 4]; 4] {
    let mut m = [[ZERO; 4]; 4];
    m[0][0] = ONE;
    m[1][2] = ONE;
    m[2][1] = ONE;
    m[3][3] = ONE;
    m
}

/// `HEIS(α) = e^{-iα/4} e^{-iα(XX+YY+ZZ)/4}`.
///
/// `XX+YY+ZZ = 2·SWAP − I`, so this equals `cos(α/2)·I − i·sin(α/2)·SWAP`.
pub fn heis_matrix(alpha: f64) -> [[Complex64; 4]; 4] {
    let c = Complex64::new((alpha / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(alpha / 2.0).sin());
    let sw = swap4();
    let mut m = [[ZERO; 4]; 4];
    for r in 0..4 {
        for k in 0..4 {
            m[r][k] = s * sw[r][k];
        }
        m[r][r] += c;
    }
    m
}

/// Unitary that prepares `(|01⟩ − |10⟩)/√2` from `|00⟩`: `X⊗X`, then `H` on
/// the first qubit, then CNOT from first to second.
pub fn singlet_matrix() -> [[Complex64; 4]; 4] {
    let x = one_qubit(GateKind::X);
    let h = one_qubit(GateKind::H);
    let id = [[ONE, ZERO], [ZERO, ONE]];
    let xx = kron2(&x, &x);
    let hi = kron2(&h, &id);
    mul4(&cnot4(), &mul4(&hi, &xx))
}

fn cnot4() -> [[Complex64; 4]; 4] {
    let mut m = [[ZERO; 4]; 4];
    m[0][0] = ONE;
    m[1][1] = ONE;
    m[2][3] = ONE;
    m[3][2] = ONE;
    m
}

fn resolve(param: &Option<Param>, bindings: &Bindings) -> Result<f64, SimError> {
    match param {
        Some(Param::Value(v)) => Ok(*v),
        Some(Param::Symbol(name)) => {
            bindings.get(name).copied().ok_or_else(|| SimError::UnboundParameter(name.clone()))
        }
        None => Err(SimError::MissingAngle),
    }
}

/// Matrix of one gate, with symbolic angles looked up in `bindings`.
pub fn gate_matrix(gate: &Gate, bindings: &Bindings) -> Result<GateMatrix, SimError> {
    Ok(match gate.kind {
        GateKind::H | GateKind::S | GateKind::T | GateKind::X | GateKind::Z => {
            GateMatrix::One(one_qubit(gate.kind))
        }
        GateKind::Cnot => GateMatrix::Two(cnot4()),
        GateKind::Swap => GateMatrix::Two(swap4()),
        GateKind::Singlet => GateMatrix::Two(singlet_matrix()),
        GateKind::Heis => GateMatrix::Two(heis_matrix(resolve(&gate.param, bindings)?)),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self, SimError> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self, SimError> {
        check_cap(n, MAX_QUBITS)?;
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Ok(Statevector { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(SimError::BadAmplitudes(len));
        }
        let n = len.trailing_zeros() as usize;
        check_cap(n, MAX_QUBITS)?;
        let sv = Statevector { n, amps };
        if (sv.norm() - 1.0).abs() > 1e-12 {
            return Err(SimError::BadAmplitudes(len));
        }
        Ok(sv)
    }

    /// Tensor product of single-qubit states; `qubits[k]` is `(⟨0|ψ⟩, ⟨1|ψ⟩)`
    /// for qubit `k`.
    pub fn product(qubits: &[(Complex64, Complex64)]) -> Result<Self, SimError> {
        let n = qubits.len();
        check_cap(n, MAX_QUBITS)?;
        let amps = (0..1usize << n)
            .map(|idx| {
                qubits
                    .iter()
                    .enumerate()
                    .fold(ONE, |acc, (k, &(a0, a1))| acc * if idx >> k & 1 == 1 { a1 } else { a0 })
            })
            .collect();
        Ok(Statevector { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn fidelity(&self, other: &Statevector) -> f64 {
        self.inner(other).norm()
    }

    pub fn apply(&mut self, m: &GateMatrix, qubits: &[usize]) {
        match m {
            GateMatrix::One(u) => {
                let bit = 1usize << qubits[0];
                for i in 0..self.amps.len() {
                    if i & bit == 0 {
                        let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                        self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                        self.amps[i | bit] = u[1][0] * a0 + u[1][1] * a1;
                    }
                }
            }
            GateMatrix::Two(u) => {
                let (ba, bb) = (1usize << qubits[0], 1usize << qubits[1]);
                let idx = |base: usize| [base, base | bb, base | ba, base | ba | bb];
                for base in 0..self.amps.len() {
                    if base & (ba | bb) != 0 {
                        continue;
                    }
                    let ix = idx(base);
                    let v = ix.map(|k| self.amps[k]);
                    for r in 0..4 {
                        self.amps[ix[r]] = (0..4).map(|c| u[r][c] * v[c]).sum();
                    }
                }
            }
        }
    }
}

fn check_cap(n: usize, max: usize) -> Result<(), SimError> {
    if n > max {
        Err(SimError::TooManyQubits { n, max })
    } else {
        Ok(())
    }
}

/// Runs `c` on `init`, whose register must cover every qubit of `c`.
pub fn run(c: &Circuit, bindings: &Bindings, init: Statevector) -> Result<Statevector, SimError> {
    check_cap(c.num_qubits, MAX_QUBITS)?;
    if init.n < c.num_qubits {
        return Err(SimError::BadAmplitudes(init.amps.len()));
    }
    let mut sv = init;
    for g in c.gates() {
        let m = gate_matrix(g, bindings)?;
        let qs: Vec<usize> = g.qubits().iter().map(|&q| q as usize).collect();
        sv.apply(&m, &qs);
    }
    Ok(sv)
}

/// Runs `c` from the basis state `|index⟩` on `c.num_qubits` qubits. The
/// singlet layer of a HEIS circuit is part of the circuit, so `index = 0`
/// gives the usual ansatz state.
pub fn simulate(c: &Circuit, bindings: &Bindings, index: usize) -> Result<Statevector, SimError> {
    run(c, bindings, Statevector::basis(c.num_qubits, index)?)
}

/// Dense `2^n × 2^n` matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Unitary {
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    /// Largest entrywise difference after dividing out the global phase
    /// fixed by the first nonzero entry of `self`.
    pub fn distance_up_to_phase(&self, other: &Unitary) -> f64 {
        assert_eq!(self.dim, other.dim);
        let k = self
            .data
            .iter()
            .position(|z| z.norm() > 1e-9)
            .expect("a unitary has a nonzero entry");
        if other.data[k].norm() < 1e-9 {
            return f64::INFINITY;
        }
        let phase = self.data[k] / other.data[k];
        let phase = phase / phase.norm();
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - phase * b).norm())
            .fold(0.0, f64::max)
    }
}

/// Full unitary of `c` over `c.num_qubits` qubits, column `j` being the
/// image of `|j⟩`.
pub fn brute_force_unitary(c: &Circuit, bindings: &Bindings) -> Result<Unitary, SimError> {
    check_cap(c.num_qubits, MAX_UNITARY_QUBITS)?;
    let dim = 1usize << c.num_qubits;
    let mut data = vec![ZERO; dim * dim];
    for j in 0..dim {
        let col = simulate(c, bindings, j)?;
        for (r, a) in col.amps.iter().enumerate() {
            data[r * dim + j] = *a;
        }
    }
    Ok(Unitary { dim, data })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub trials: usize,
    pub min_fidelity: f64,
    pub mediator_return_min: f64,
    pub pass: bool,
}

/// Haar-random single-qubit state.
fn random_qubit(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    let theta = (1.0 - 2.0 * rng.gen::<f64>()).acos();
    let phi = 2.0 * PI * rng.gen::<f64>();
    (
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    )
}

fn relabel(c: &Circuit, index: &BTreeMap<Qubit, usize>) -> Circuit {
    Circuit::from_gates(
        index.len(),
        c.gates().iter().map(|g| g.map_qubits(|q| index[&q] as Qubit)),
    )
}

/// Checks that `routed` implements `original` on random product inputs.
///
/// Logical qubit `q` starts on hardware node `initial_layout[q]` and must
/// end on `final_layout()[q]`; every other hardware node starts in `|0⟩` and
/// must return to it. Both registers are relabeled densely, so only the
/// qubits actually used count toward the cap.
pub fn verify_equivalence(
    original: &Circuit,
    routed: &RoutingResult,
    bindings: &Bindings,
    trials: usize,
    seed: u64,
) -> Result<VerifyReport, SimError> {
    let start = &routed.initial_layout;
    let end = routed.final_layout();

    let logical: BTreeSet<Qubit> =
        original.active_qubits().into_iter().chain(start.keys().copied()).collect();
    let lidx: BTreeMap<Qubit, usize> = logical.iter().enumerate().map(|(k, &q)| (q, k)).collect();

    let hardware: BTreeSet<Qubit> = routed
        .circuit
        .active_qubits()
        .into_iter()
        .chain(start.values().copied())
        .chain(end.values().copied())
        .collect();
    let hidx: BTreeMap<Qubit, usize> = hardware.iter().enumerate().map(|(k, &q)| (q, k)).collect();
    check_cap(logical.len(), MAX_QUBITS)?;
    check_cap(hardware.len(), MAX_QUBITS)?;

    let orig = relabel(original, &lidx);
    let rout = relabel(&routed.circuit, &hidx);
    let place = |layout: &BTreeMap<Qubit, Qubit>, q: Qubit| -> usize {
        hidx[&layout.get(&q).copied().unwrap_or(q)]
    };
    let home_mask: usize = logical.iter().map(|&q| 1usize << place(&end, q)).sum();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_fid = f64::INFINITY;
    let mut min_ret = f64::INFINITY;
    for _ in 0..trials {
        let states: Vec<_> = logical.iter().map(|_| random_qubit(&mut rng)).collect();
        let want = run(&orig, bindings, Statevector::product(&states)?)?;

        let mut hw = vec![(ONE, ZERO); hardware.len()];
        for (k, &q) in logical.iter().enumerate() {
            hw[place(start, q)] = states[k];
        }
        let got = run(&rout, bindings, Statevector::product(&hw)?)?;

        let ret: f64 = got
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & !home_mask == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        let extracted: Vec<Complex64> = (0..1usize << logical.len())
            .map(|x| {
                let i: usize = logical
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| x >> k & 1 == 1)
                    .map(|(_, &q)| 1usize << place(&end, q))
                    .sum();
                got.amps[i]
            })
            .collect();
        let extracted = Statevector { n: logical.len(), amps: extracted };
        min_fid = min_fid.min(want.fidelity(&extracted));
        min_ret = min_ret.min(ret);
    }
    if trials == 0 {
        min_fid = 1.0;
        min_ret = 1.0;
    }
    Ok(VerifyReport {
        trials,
        min_fidelity: min_fid,
        mediator_return_min: min_ret,
        pass: min_fid >= 1.0 - TOLERANCE && min_ret >= 1.0 - TOLERANCE,
    })
}

/// Random angle for every free parameter of `c`.
pub fn random_bindings(c: &Circuit, seed: u64) -> Bindings {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    c.params.iter().map(|p| (p.clone(), rng.gen_range(-PI..PI))).collect()
}
