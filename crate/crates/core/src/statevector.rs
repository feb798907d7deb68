//! Exact complex statevector simulation of small qubit registers.
//!
//! The simulator stores all `2^n` amplitudes at double precision and applies
//! gates in place. Rotation gates follow the half-angle convention
//! `R_G(θ) = exp(-iθG/2)` for `G ∈ {X, Y, Z}`, and `ZZ(θ) = exp(-iθ(Z⊗Z)/2)`.
//! Basis index bit `q` holds the state of qubit `q`, so `|1⟩` on qubit 0 of a
//! two-qubit register is amplitude index `0b01`.
//!
//! No sampling, density matrices, or noise channels: expectation values are
//! computed exactly from the amplitudes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard qubit ceiling; `2^12` amplitudes keep every workload trivially dense.
pub const MAX_QUBITS: usize = 12;

/// A quantum gate acting on one or two qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    /// `exp(-iθX/2)` on `qubit`.
    Rx { qubit: usize, angle: f64 },
    /// `exp(-iθY/2)` on `qubit`.
    Ry { qubit: usize, angle: f64 },
    /// `exp(-iθZ/2)` on `qubit`.
    Rz { qubit: usize, angle: f64 },
    /// Controlled-X with the given control and target.
    Cnot { control: usize, target: usize },
    /// `exp(-iθ(Z⊗Z)/2)` on the qubit pair `(a, b)`.
    Zz { a: usize, b: usize, angle: f64 },
}

impl Gate {
    /// Angle of a rotation gate, if any.
    pub fn angle(&self) -> Option<f64> {
        match self {
            Gate::Rx { angle, .. }
            | Gate::Ry { angle, .. }
            | Gate::Rz { angle, .. }
            | Gate::Zz { angle, .. } => Some(*angle),
            Gate::Cnot { .. } => None,
        }
    }

    /// Returns a copy with the rotation angle shifted by `delta`.
    /// CNOT gates are returned unchanged.
    pub fn with_angle_shift(&self, delta: f64) -> Gate {
        let mut gate = *self;
        match &mut gate {
            Gate::Rx { angle, .. }
            | Gate::Ry { angle, .. }
            | Gate::Rz { angle, .. }
            | Gate::Zz { angle, .. } => *angle += delta,
            Gate::Cnot { .. } => {}
        }
        gate
    }
}

/// One term of a Z-string observable: `coefficient · Z_{q1} Z_{q2} ...`.
///
/// An empty support is the identity term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZTerm {
    pub coefficient: f64,
    pub support: Vec<usize>,
}

impl ZTerm {
    pub fn new(coefficient: f64, support: &[usize]) -> Self {
        let mut support = support.to_vec();
        support.sort_unstable();
        support.dedup();
        ZTerm {
            coefficient,
            support,
        }
    }
}

/// A real linear combination of Pauli-Z strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    terms: Vec<ZTerm>,
}

impl Observable {
    pub fn new(terms: Vec<ZTerm>) -> Self {
        Observable { terms }
    }

    /// Single `Z` on one qubit.
    pub fn z(qubit: usize) -> Self {
        Observable::new(vec![ZTerm::new(1.0, &[qubit])])
    }

    /// The permutation-symmetric observable `(Z_0 + Z_1 + ... + Z_{k-1}) / k`.
    pub fn mean_z(num_qubits: usize) -> Self {
        let coeff = 1.0 / num_qubits as f64;
        Observable::new(
            (0..num_qubits)
                .map(|q| ZTerm::new(coeff, &[q]))
                .collect(),
        )
    }

    pub fn terms(&self) -> &[ZTerm] {
        &self.terms
    }

    /// Sum of coefficient magnitudes; bounds the expectation value.
    pub fn coefficient_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// Largest qubit index referenced, if any term has support.
    pub fn max_qubit(&self) -> Option<usize> {
        self.terms
            .iter()
            .flat_map(|t| t.support.iter().copied())
            .max()
    }
}

/// Dense complex statevector over `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros computational basis state `|0...0⟩`.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        if num_qubits < 1 || num_qubits > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "num_qubits must be in 1..={MAX_QUBITS}, got {num_qubits}"
            )));
        }
        let mut amplitudes = vec![Complex64::ZERO; 1 << num_qubits];
        amplitudes[0] = Complex64::ONE;
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// Builds a state directly from amplitudes. Length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = amplitudes.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Shape(format!(
                "amplitude count must be a power of two >= 2, got {n}"
            )));
        }
        Ok(StateVector {
            num_qubits: n.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `Σ|a_i|²`; unitary evolution keeps this at 1.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::Index(format!(
                "qubit {qubit} out of range for {} qubits",
                self.num_qubits
            )));
        }
        Ok(())
    }

    /// Applies a 2x2 unitary to the target qubit.
    fn apply_single(&mut self, qubit: usize, u: [[Complex64; 2]; 2]) {
        let step = 1 << qubit;
        for base in (0..self.amplitudes.len()).step_by(2 * step) {
            for offset in 0..step {
                let i = base + offset;
                let j = i | step;
                let a = self.amplitudes[i];
                let b = self.amplitudes[j];
                self.amplitudes[i] = u[0][0] * a + u[0][1] * b;
                self.amplitudes[j] = u[1][0] * a + u[1][1] * b;
            }
        }
    }

    /// Applies a gate to the state in place.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        match *gate {
            Gate::Rx { qubit, angle } => {
                self.check_qubit(qubit)?;
                let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
                self.apply_single(
                    qubit,
                    [
                        [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                        [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
                    ],
                );
            }
            Gate::Ry { qubit, angle } => {
                self.check_qubit(qubit)?;
                let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
                self.apply_single(
                    qubit,
                    [
                        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                    ],
                );
            }
            Gate::Rz { qubit, angle } => {
                self.check_qubit(qubit)?;
                let phase = Complex64::from_polar(1.0, angle / 2.0);
                self.apply_single(
                    qubit,
                    [
                        [phase.conj(), Complex64::ZERO],
                        [Complex64::ZERO, phase],
                    ],
                );
            }
            Gate::Cnot { control, target } => {
                self.check_qubit(control)?;
                self.check_qubit(target)?;
                if control == target {
                    return Err(Error::Index(format!(
                        "CNOT control and target must differ, both are {control}"
                    )));
                }
                let cmask = 1 << control;
                let tmask = 1 << target;
                for i in 0..self.amplitudes.len() {
                    if i & cmask != 0 && i & tmask == 0 {
                        self.amplitudes.swap(i, i | tmask);
                    }
                }
            }
            Gate::Zz { a, b, angle } => {
                self.check_qubit(a)?;
                self.check_qubit(b)?;
                if a == b {
                    return Err(Error::Index(format!(
                        "ZZ qubits must differ, both are {a}"
                    )));
                }
                // Diagonal: equal bits pick up e^{-iθ/2}, unequal e^{+iθ/2}.
                let plus = Complex64::from_polar(1.0, angle / 2.0);
                let minus = plus.conj();
                let amask = 1 << a;
                let bmask = 1 << b;
                for (i, amp) in self.amplitudes.iter_mut().enumerate() {
                    let parity = ((i & amask != 0) as u8) ^ ((i & bmask != 0) as u8);
                    *amp *= if parity == 0 { minus } else { plus };
                }
            }
        }
        Ok(())
    }

    /// Exchanges the basis-label bits of qubits `a` and `b`.
    pub fn swap_qubits(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::Index(format!(
                "swap qubits must differ, both are {a}"
            )));
        }
        let amask = 1 << a;
        let bmask = 1 << b;
        for i in 0..self.amplitudes.len() {
            let bit_a = i & amask != 0;
            let bit_b = i & bmask != 0;
            if bit_a != bit_b {
                let j = i ^ amask ^ bmask;
                if i < j {
                    self.amplitudes.swap(i, j);
                }
            }
        }
        Ok(())
    }

    /// Exact expectation value `⟨ψ|O|ψ⟩` of a Z-string observable.
    ///
    /// An observable with no terms is the zero operator and yields 0.
    pub fn expectation(&self, obs: &Observable) -> Result<f64> {
        if let Some(max) = obs.max_qubit() {
            self.check_qubit(max)?;
        }
        let mut total = 0.0;
        for term in obs.terms() {
            let mask: usize = term.support.iter().map(|q| 1usize << q).sum();
            let mut value = 0.0;
            for (i, amp) in self.amplitudes.iter().enumerate() {
                let sign = if (i & mask).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                value += sign * amp.norm_sqr();
            }
            total += term.coefficient * value;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    const TOL: f64 = 1e-10;

    fn assert_close(a: f64, b: f64) {
        assert!((a - b).abs() < TOL, "{a} != {b}");
    }

    // Dense-matrix oracle: builds the full 2^n x 2^n unitary of a gate via
    // Kronecker products and applies it by explicit matrix-vector product.
    // Kept deliberately naive and independent of the fast path.
    mod dense {
        use super::*;

        pub type Mat = Vec<Vec<Complex64>>;

        pub fn identity(dim: usize) -> Mat {
            let mut m = vec![vec![Complex64::ZERO; dim]; dim];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = Complex64::ONE;
            }
            m
        }

        pub fn single_qubit_matrix(gate: &Gate) -> [[Complex64; 2]; 2] {
            match *gate {
                Gate::Rx { angle, .. } => {
                    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
                    [
                        [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                        [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
                    ]
                }
                Gate::Ry { angle, .. } => {
                    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
                    [
                        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                    ]
                }
                Gate::Rz { angle, .. } => {
                    let p = Complex64::from_polar(1.0, angle / 2.0);
                    [
                        [p.conj(), Complex64::ZERO],
                        [Complex64::ZERO, p],
                    ]
                }
                _ => panic!("not a single-qubit gate"),
            }
        }

        /// Full-register unitary for any gate, with basis bit q = qubit q.
        pub fn gate_matrix(gate: &Gate, num_qubits: usize) -> Mat {
            let dim = 1 << num_qubits;
            match *gate {
                Gate::Rx { qubit, .. } | Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } => {
                    let u = single_qubit_matrix(gate);
                    let mut m = vec![vec![Complex64::ZERO; dim]; dim];
                    for col in 0..dim {
                        let bit = (col >> qubit) & 1;
                        for row_bit in 0..2 {
                            let row = (col & !(1 << qubit)) | (row_bit << qubit);
                            m[row][col] = u[row_bit][bit];
                        }
                    }
                    m
                }
                Gate::Cnot { control, target } => {
                    let mut m = vec![vec![Complex64::ZERO; dim]; dim];
                    for col in 0..dim {
                        let row = if (col >> control) & 1 == 1 {
                            col ^ (1 << target)
                        } else {
                            col
                        };
                        m[row][col] = Complex64::ONE;
                    }
                    m
                }
                Gate::Zz { a, b, angle } => {
                    let mut m = identity(dim);
                    for col in 0..dim {
                        let parity = ((col >> a) & 1) ^ ((col >> b) & 1);
                        let phase = if parity == 0 { -angle / 2.0 } else { angle / 2.0 };
                        m[col][col] = Complex64::from_polar(1.0, phase);
                    }
                    m
                }
            }
        }

        pub fn matvec(m: &Mat, v: &[Complex64]) -> Vec<Complex64> {
            m.iter()
                .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
                .collect()
        }
    }

    fn random_state(rng: &mut ChaCha8Rng, num_qubits: usize) -> StateVector {
        let mut state = StateVector::zero(num_qubits).unwrap();
        for _ in 0..12 {
            state
                .apply_gate(&random_gate(rng, num_qubits))
                .unwrap();
        }
        state
    }

    fn random_gate(rng: &mut ChaCha8Rng, num_qubits: usize) -> Gate {
        let angle = rng.random_range(-PI..PI);
        let q = rng.random_range(0..num_qubits);
        match rng.random_range(0..5) {
            0 => Gate::Rx { qubit: q, angle },
            1 => Gate::Ry { qubit: q, angle },
            2 => Gate::Rz { qubit: q, angle },
            3 if num_qubits > 1 => {
                let mut p = rng.random_range(0..num_qubits);
                while p == q {
                    p = rng.random_range(0..num_qubits);
                }
                Gate::Cnot { control: q, target: p }
            }
            _ if num_qubits > 1 => {
                let mut p = rng.random_range(0..num_qubits);
                while p == q {
                    p = rng.random_range(0..num_qubits);
                }
                Gate::Zz { a: q, b: p, angle }
            }
            _ => Gate::Ry { qubit: q, angle },
        }
    }

    #[test]
    fn zero_state_is_basis_zero() {
        let s = StateVector::zero(1).unwrap();
        assert_eq!(s.amplitudes(), &[Complex64::ONE, Complex64::ZERO]);
        let s = StateVector::zero(2).unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::ONE);
        assert!(s.amplitudes()[1..].iter().all(|a| *a == Complex64::ZERO));
    }

    #[test]
    fn zero_state_respects_capacity() {
        assert!(matches!(StateVector::zero(0), Err(Error::Capacity(_))));
        assert!(matches!(StateVector::zero(13), Err(Error::Capacity(_))));
        assert!(StateVector::zero(12).is_ok());
    }

    #[test]
    fn ry_pi_flips_zero_to_one() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_gate(&Gate::Ry { qubit: 0, angle: PI }).unwrap();
        assert!(s.amplitudes()[0].norm() < TOL);
        assert!((s.amplitudes()[1] - Complex64::ONE).norm() < TOL);
    }

    #[test]
    fn ry_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = random_state(&mut rng, 3);
        let before = s.clone();
        s.apply_gate(&Gate::Ry { qubit: 1, angle: 0.0 }).unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < TOL);
        }
    }

    #[test]
    fn cnot_truth_table() {
        // |10⟩ (qubit 0 set) with control 0 flips qubit 1 -> |11⟩.
        let mut s = StateVector::zero(2).unwrap();
        s.apply_gate(&Gate::Ry { qubit: 0, angle: PI }).unwrap();
        s.apply_gate(&Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert!((s.amplitudes()[0b11] - Complex64::ONE).norm() < TOL);
    }

    #[test]
    fn zz_on_basis_state_is_pure_phase() {
        let mut s = StateVector::zero(2).unwrap();
        let before: Vec<f64> = s.amplitudes().iter().map(|a| a.norm_sqr()).collect();
        s.apply_gate(&Gate::Zz { a: 0, b: 1, angle: 0.7 }).unwrap();
        let expected = Complex64::from_polar(1.0, -0.35);
        assert!((s.amplitudes()[0] - expected).norm() < TOL);
        for (a, p) in s.amplitudes().iter().zip(before) {
            assert!((a.norm_sqr() - p).abs() < TOL);
        }
    }

    #[test]
    fn invalid_indices_are_rejected() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(matches!(
            s.apply_gate(&Gate::Ry { qubit: 2, angle: 1.0 }),
            Err(Error::Index(_))
        ));
        assert!(matches!(
            s.apply_gate(&Gate::Cnot { control: 1, target: 1 }),
            Err(Error::Index(_))
        ));
        assert!(matches!(s.swap_qubits(0, 0), Err(Error::Index(_))));
        assert!(matches!(s.swap_qubits(0, 5), Err(Error::Index(_))));
    }

    #[test]
    fn expectation_of_z_on_basis_states() {
        let s = StateVector::zero(1).unwrap();
        assert_close(s.expectation(&Observable::z(0)).unwrap(), 1.0);

        let mut s = StateVector::zero(1).unwrap();
        s.apply_gate(&Gate::Ry { qubit: 0, angle: FRAC_PI_2 }).unwrap();
        assert_close(s.expectation(&Observable::z(0)).unwrap(), 0.0);
    }

    #[test]
    fn expectation_of_empty_observable_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = random_state(&mut rng, 2);
        assert_close(s.expectation(&Observable::new(vec![])).unwrap(), 0.0);
    }

    #[test]
    fn bell_state_zz_matches_dense_oracle() {
        // RY(π/2) then CNOT prepares a Bell-like state up to phases.
        let gates = [
            Gate::Ry { qubit: 0, angle: FRAC_PI_2 },
            Gate::Cnot { control: 0, target: 1 },
        ];
        let mut fast = StateVector::zero(2).unwrap();
        let mut slow = vec![Complex64::ZERO; 4];
        slow[0] = Complex64::ONE;
        for g in &gates {
            fast.apply_gate(g).unwrap();
            slow = dense::matvec(&dense::gate_matrix(g, 2), &slow);
        }
        let obs = Observable::new(vec![ZTerm::new(1.0, &[0, 1])]);
        let fast_val = fast.expectation(&obs).unwrap();
        // Oracle expectation: Σ sign(i) |slow_i|².
        let slow_val: f64 = slow
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let sign = if (i & 0b11).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                sign * a.norm_sqr()
            })
            .sum();
        assert_close(fast_val, slow_val);
    }

    #[test]
    fn fast_path_matches_dense_unitary() {
        // 20 random angles per gate kind on registers of 1..=3 qubits.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            for num_qubits in 1..=3usize {
                let state = random_state(&mut rng, num_qubits);
                for _ in 0..5 {
                    let gate = random_gate(&mut rng, num_qubits);
                    let mut fast = state.clone();
                    fast.apply_gate(&gate).unwrap();
                    let slow = dense::matvec(
                        &dense::gate_matrix(&gate, num_qubits),
                        state.amplitudes(),
                    );
                    for (a, b) in fast.amplitudes().iter().zip(&slow) {
                        assert!((a - b).norm() < TOL, "gate {gate:?} mismatch");
                    }
                }
            }
        }
    }

    #[test]
    fn norm_preserved_over_random_sequences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let num_qubits = rng.random_range(1..=6);
            let mut state = StateVector::zero(num_qubits).unwrap();
            let len = rng.random_range(1..=50);
            for _ in 0..len {
                state.apply_gate(&random_gate(&mut rng, num_qubits)).unwrap();
                assert!((state.norm_sqr() - 1.0).abs() < TOL);
            }
        }
    }

    #[test]
    fn ry_angle_gives_cos_expectation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let theta = rng.random_range(-PI..PI);
            let mut s = StateVector::zero(1).unwrap();
            s.apply_gate(&Gate::Ry { qubit: 0, angle: theta }).unwrap();
            assert_close(s.expectation(&Observable::z(0)).unwrap(), theta.cos());
        }
    }

    #[test]
    fn rotations_invert_and_involutions_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let state = random_state(&mut rng, 3);
        let theta = 0.83;
        let pairs: Vec<(Gate, Gate)> = vec![
            (Gate::Rx { qubit: 1, angle: theta }, Gate::Rx { qubit: 1, angle: -theta }),
            (Gate::Ry { qubit: 2, angle: theta }, Gate::Ry { qubit: 2, angle: -theta }),
            (Gate::Rz { qubit: 0, angle: theta }, Gate::Rz { qubit: 0, angle: -theta }),
            (Gate::Zz { a: 0, b: 2, angle: theta }, Gate::Zz { a: 0, b: 2, angle: -theta }),
            (Gate::Cnot { control: 0, target: 1 }, Gate::Cnot { control: 0, target: 1 }),
        ];
        for (g, ginv) in pairs {
            let mut s = state.clone();
            s.apply_gate(&g).unwrap();
            s.apply_gate(&ginv).unwrap();
            for (a, b) in s.amplitudes().iter().zip(state.amplitudes()) {
                assert!((a - b).norm() < TOL, "{g:?} not inverted");
            }
        }
    }

    #[test]
    fn swap_permutes_basis_labels() {
        // |01⟩ has qubit 1 set -> index 0b10.
        let mut s = StateVector::zero(2).unwrap();
        s.apply_gate(&Gate::Ry { qubit: 1, angle: PI }).unwrap();
        s.swap_qubits(0, 1).unwrap();
        assert!((s.amplitudes()[0b01] - Complex64::ONE).norm() < TOL);

        // Symmetric state is a fixed point.
        let mut s = StateVector::zero(2).unwrap();
        s.swap_qubits(0, 1).unwrap();
        assert!((s.amplitudes()[0] - Complex64::ONE).norm() < TOL);

        // Involution on a random state.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let state = random_state(&mut rng, 3);
        let mut s = state.clone();
        s.swap_qubits(0, 2).unwrap();
        s.swap_qubits(0, 2).unwrap();
        for (a, b) in s.amplitudes().iter().zip(state.amplitudes()) {
            assert!((a - b).norm() < TOL);
        }
    }

    #[test]
    fn expectation_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let s = random_state(&mut rng, 3);
        let o1 = Observable::new(vec![ZTerm::new(1.0, &[0]), ZTerm::new(0.5, &[1, 2])]);
        let o2 = Observable::new(vec![ZTerm::new(-0.3, &[2])]);
        let (a, b) = (1.7, -2.2);
        let combined = Observable::new(
            o1.terms()
                .iter()
                .map(|t| ZTerm::new(a * t.coefficient, &t.support))
                .chain(
                    o2.terms()
                        .iter()
                        .map(|t| ZTerm::new(b * t.coefficient, &t.support)),
                )
                .collect(),
        );
        let lhs = s.expectation(&combined).unwrap();
        let rhs = a * s.expectation(&o1).unwrap() + b * s.expectation(&o2).unwrap();
        assert_close(lhs, rhs);
    }

    #[test]
    fn single_z_expectation_stays_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let s = random_state(&mut rng, 4);
            let q = rng.random_range(0..4);
            let v = s.expectation(&Observable::z(q)).unwrap();
            assert!((-1.0 - TOL..=1.0 + TOL).contains(&v));
        }
    }
}
