//! Exact statevector simulation of small qubit registers.
//!
//! An [`AmplitudeRegister`] holds the 2^n complex amplitudes of an n-qubit
//! register. Gates are pure functions: each returns a new register and leaves
//! the input untouched. The module provides exactly the operations the
//! amplitude-amplified learner needs: uniform initialization, single-qubit
//! Hadamard, conditional phase shifts, the two Grover reflections, repeated
//! Grover iteration, Born-rule probabilities, and seeded measurement.

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

/// Simulator cap on register width; a statevector of 2^20 amplitudes is the
/// largest we allow before memory and runtime stop being "exact and instant".
pub const MAX_QUBITS: usize = 20;

/// Tolerance for the normalization invariant Σ|c|² = 1 on construction.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("register size must be between 1 and {MAX_QUBITS} qubits, got {0}")]
    InvalidSize(usize),
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: register holds {expected} amplitudes, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("amplitude vector is not normalized (norm² = {norm_sq})")]
    NotNormalized { norm_sq: f64 },
    #[error("reflection axis is not normalized (norm² = {norm_sq})")]
    InvalidAxis { norm_sq: f64 },
    #[error("{l} Grover iterations exceeds the cap of {cap} for {n_qubits} qubits")]
    ExcessiveIterations { l: usize, cap: usize, n_qubits: usize },
    #[error("cannot measure a register with no probability mass")]
    DegenerateState,
}

/// An n-qubit register of 2^n complex probability amplitudes.
///
/// Index `a` of the amplitude vector is the computational basis state |a⟩,
/// with qubit `i` mapped to bit `i` of the index (qubit 0 is the least
/// significant bit). The register is normalized on construction and every
/// operation is unitary, so Σ|c_a|² stays 1 up to floating-point dust.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeRegister {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl AmplitudeRegister {
    /// The equal superposition: every amplitude is 1/√(2^n), real and positive.
    pub fn uniform(n_qubits: usize) -> Result<Self, QuantumError> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            n_qubits,
            amplitudes: vec![amp; dim],
        })
    }

    /// The basis state |index⟩.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self, QuantumError> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(QuantumError::IndexOutOfRange { index, dim });
        }
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[index] = Complex64::ONE;
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Builds a register from raw amplitudes, validating the length is a
    /// power of two within the size cap and that Σ|c|² = 1 within 1e-9.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, QuantumError> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(QuantumError::NotPowerOfTwo(dim));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_size(n_qubits)?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(QuantumError::NotNormalized { norm_sq });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Real amplitudes, normalized for the caller. Handy for tests and docs.
    pub fn from_real(values: &[f64]) -> Result<Self, QuantumError> {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(QuantumError::NotNormalized { norm_sq: 0.0 });
        }
        Self::from_amplitudes(
            values
                .iter()
                .map(|v| Complex64::new(v / norm, 0.0))
                .collect(),
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of basis states, 2^n.
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Single-qubit Hadamard on the given tensor factor.
    ///
    /// Pairs amplitudes whose indices differ in bit `qubit` and maps
    /// (a, b) to ((a+b)/√2, (a−b)/√2). Applying it twice is the identity.
    pub fn hadamard(&self, qubit: usize) -> Result<Self, QuantumError> {
        if qubit >= self.n_qubits {
            return Err(QuantumError::QubitOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        let mask = 1usize << qubit;
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut out = self.amplitudes.clone();
        for i in 0..self.dim() {
            if i & mask == 0 {
                let j = i | mask;
                let a = self.amplitudes[i];
                let b = self.amplitudes[j];
                out[i] = (a + b) * inv_sqrt2;
                out[j] = (a - b) * inv_sqrt2;
            }
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes: out,
        })
    }

    /// Conditional phase shift: amplitude `a` is multiplied by e^(iφ_a).
    ///
    /// Probabilities are untouched since |e^(iφ)| = 1.
    pub fn phase_shift(&self, shift: &PhaseShift) -> Result<Self, QuantumError> {
        if shift.len() != self.dim() {
            return Err(QuantumError::DimensionMismatch {
                expected: self.dim(),
                found: shift.len(),
            });
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(shift.phases())
            .map(|(a, &phi)| a * Complex64::from_polar(1.0, phi))
            .collect();
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes,
        })
    }

    /// The oracle reflection I − 2|k⟩⟨k|: negates the amplitude at `target`
    /// and leaves every other amplitude untouched. Exact (no rounding), and
    /// equivalent to a phase shift of π at the target.
    pub fn oracle_reflection(&self, target: usize) -> Result<Self, QuantumError> {
        if target >= self.dim() {
            return Err(QuantumError::IndexOutOfRange {
                index: target,
                dim: self.dim(),
            });
        }
        let mut amplitudes = self.amplitudes.clone();
        amplitudes[target] = -amplitudes[target];
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes,
        })
    }

    /// The reflection 2|axis⟩⟨axis| − I.
    ///
    /// Preserves the component along `axis` and flips the sign of anything
    /// orthogonal to it. When `axis` is the uniform superposition this is the
    /// inversion about the mean amplitude.
    pub fn reflect_about(&self, axis: &AmplitudeRegister) -> Result<Self, QuantumError> {
        if axis.dim() != self.dim() {
            return Err(QuantumError::DimensionMismatch {
                expected: self.dim(),
                found: axis.dim(),
            });
        }
        let axis_norm_sq = axis.norm_sqr();
        if (axis_norm_sq.sqrt() - 1.0).abs() > 1e-6 {
            return Err(QuantumError::InvalidAxis {
                norm_sq: axis_norm_sq,
            });
        }
        // ⟨axis|self⟩
        let inner: Complex64 = axis
            .amplitudes
            .iter()
            .zip(&self.amplitudes)
            .map(|(u, v)| u.conj() * v)
            .sum();
        let two_inner = inner * 2.0;
        let amplitudes = axis
            .amplitudes
            .iter()
            .zip(&self.amplitudes)
            .map(|(u, v)| two_inner * u - v)
            .collect();
        Ok(Self {
            n_qubits: self.n_qubits,
            amplitudes,
        })
    }

    /// L Grover iterations toward the basis state `target`.
    ///
    /// The diffusion axis is frozen at this register's state on entry, so the
    /// operator applied is [U_axis · U_target]^L with both reflections fixed.
    /// For a real register with non-negative entries whose target amplitude is
    /// sin β, the exit target amplitude is sin((2L+1)β): each iteration is a
    /// rotation by 2β in the plane spanned by |target⟩ and the rest of the
    /// register. See [`closed_form_amplitude`] for the analytic form.
    ///
    /// The caller owns overshoot control: nothing here clamps (2L+1)β at π/2,
    /// and registers with negative entries fall outside the arcsin law.
    pub fn grover_update(&self, target: usize, l: usize) -> Result<Self, QuantumError> {
        if target >= self.dim() {
            return Err(QuantumError::IndexOutOfRange {
                index: target,
                dim: self.dim(),
            });
        }
        let cap = (10.0 * 2f64.powf(self.n_qubits as f64 / 2.0)).floor() as usize;
        if l > cap {
            return Err(QuantumError::ExcessiveIterations {
                l,
                cap,
                n_qubits: self.n_qubits,
            });
        }
        let axis = self.clone();
        let mut current = self.clone();
        for _ in 0..l {
            current = current.oracle_reflection(target)?;
            current = current.reflect_about(&axis)?;
        }
        Ok(current)
    }

    /// Born-rule probabilities |c_a|² per basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Samples a basis index with probability |c_a|².
    ///
    /// The register is not mutated: the caller keeps the superposition as
    /// policy memory and only observes an outcome. Deterministic given the
    /// rng state.
    pub fn measure<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize, QuantumError> {
        let total = self.norm_sqr();
        if total < 1e-12 {
            return Err(QuantumError::DegenerateState);
        }
        let draw: f64 = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (index, amp) in self.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            if p > 0.0 {
                last_nonzero = index;
            }
            acc += p;
            if draw < acc {
                return Ok(index);
            }
        }
        // Rounding can leave acc a hair below the draw; the mass is at the
        // last nonzero entry.
        Ok(last_nonzero)
    }
}

/// Diagonal phase angles φ_a, one per basis state of the target register.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShift {
    phases: Vec<f64>,
}

impl PhaseShift {
    pub fn new(phases: Vec<f64>) -> Self {
        Self { phases }
    }

    /// A shift of `angle` at one basis index and zero everywhere else.
    pub fn single(dim: usize, index: usize, angle: f64) -> Result<Self, QuantumError> {
        if index >= dim {
            return Err(QuantumError::IndexOutOfRange { index, dim });
        }
        let mut phases = vec![0.0; dim];
        phases[index] = angle;
        Ok(Self { phases })
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }
}

/// Target and residual amplitudes after L Grover iterations, in closed form.
///
/// For an initial target amplitude sin β (the rest of the register carrying
/// cos β), returns (sin((2L+1)β), cos((2L+1)β)). This is the analytic oracle
/// the simulated [`AmplitudeRegister::grover_update`] is tested against.
pub fn closed_form_amplitude(beta: f64, l: usize) -> (f64, f64) {
    debug_assert!(
        (0.0..=std::f64::consts::FRAC_PI_2).contains(&beta),
        "beta out of domain: {beta}"
    );
    let angle = (2 * l + 1) as f64 * beta;
    (angle.sin(), angle.cos())
}

fn check_size(n_qubits: usize) -> Result<(), QuantumError> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(QuantumError::InvalidSize(n_qubits));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    /// Dense-matrix oracle for the reflections: independent of the fast path.
    mod dense {
        use num_complex::Complex64;

        pub type Matrix = Vec<Vec<Complex64>>;

        pub fn reflection_about(axis: &[Complex64]) -> Matrix {
            let dim = axis.len();
            let mut m = vec![vec![Complex64::ZERO; dim]; dim];
            for (r, row) in m.iter_mut().enumerate() {
                for (c, entry) in row.iter_mut().enumerate() {
                    *entry = 2.0 * axis[r] * axis[c].conj();
                    if r == c {
                        *entry -= Complex64::ONE;
                    }
                }
            }
            m
        }

        pub fn oracle(dim: usize, target: usize) -> Matrix {
            let mut m = vec![vec![Complex64::ZERO; dim]; dim];
            for (r, row) in m.iter_mut().enumerate() {
                row[r] = if r == target {
                    -Complex64::ONE
                } else {
                    Complex64::ONE
                };
            }
            m
        }

        pub fn apply(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
            m.iter()
                .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
                .collect()
        }
    }

    /// Brute-force Grover via explicit matrix products, used as the
    /// independent route in the equivalence tests.
    fn grover_by_matrix(reg: &AmplitudeRegister, target: usize, l: usize) -> Vec<Complex64> {
        let axis_matrix = dense::reflection_about(reg.amplitudes());
        let oracle_matrix = dense::oracle(reg.dim(), target);
        let mut v = reg.amplitudes().to_vec();
        for _ in 0..l {
            v = dense::apply(&oracle_matrix, &v);
            v = dense::apply(&axis_matrix, &v);
        }
        v
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!(
            (a - b).norm() <= tol,
            "amplitudes differ: {a} vs {b} (tol {tol})"
        );
    }

    fn random_register(rng: &mut ChaCha12Rng, n_qubits: usize) -> AmplitudeRegister {
        let dim = 1usize << n_qubits;
        let raw: Vec<Complex64> = (0..dim)
            .map(|_| {
                Complex64::new(
                    rng.random::<f64>() * 2.0 - 1.0,
                    rng.random::<f64>() * 2.0 - 1.0,
                )
            })
            .collect();
        let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        AmplitudeRegister::from_amplitudes(raw.into_iter().map(|a| a / norm).collect()).unwrap()
    }

    #[test]
    fn uniform_register_values() {
        let one = AmplitudeRegister::uniform(1).unwrap();
        let x = std::f64::consts::FRAC_1_SQRT_2;
        for amp in one.amplitudes() {
            assert_close(*amp, Complex64::new(x, 0.0), 1e-15);
        }

        let two = AmplitudeRegister::uniform(2).unwrap();
        for amp in two.amplitudes() {
            assert_close(*amp, Complex64::new(0.5, 0.0), 1e-15);
        }

        let three = AmplitudeRegister::uniform(3).unwrap();
        for amp in three.amplitudes() {
            assert_close(*amp, Complex64::new(1.0 / 8f64.sqrt(), 0.0), 1e-15);
        }
    }

    #[test]
    fn uniform_register_rejects_bad_sizes() {
        assert_eq!(
            AmplitudeRegister::uniform(0),
            Err(QuantumError::InvalidSize(0))
        );
        assert_eq!(
            AmplitudeRegister::uniform(21),
            Err(QuantumError::InvalidSize(21))
        );
        assert!(AmplitudeRegister::uniform(20).is_ok());
    }

    #[test]
    fn hadamard_on_basis_states() {
        let x = std::f64::consts::FRAC_1_SQRT_2;

        let zero = AmplitudeRegister::basis(1, 0).unwrap();
        let h0 = zero.hadamard(0).unwrap();
        assert_close(h0.amplitude(0), Complex64::new(x, 0.0), 1e-15);
        assert_close(h0.amplitude(1), Complex64::new(x, 0.0), 1e-15);

        let one = AmplitudeRegister::basis(1, 1).unwrap();
        let h1 = one.hadamard(0).unwrap();
        assert_close(h1.amplitude(0), Complex64::new(x, 0.0), 1e-15);
        assert_close(h1.amplitude(1), Complex64::new(-x, 0.0), 1e-15);
    }

    #[test]
    fn hadamard_index_out_of_range() {
        let reg = AmplitudeRegister::uniform(2).unwrap();
        assert_eq!(
            reg.hadamard(2),
            Err(QuantumError::QubitOutOfRange {
                index: 2,
                n_qubits: 2
            })
        );
    }

    #[test]
    fn hadamard_ladder_builds_uniform() {
        let mut reg = AmplitudeRegister::basis(4, 0).unwrap();
        for q in 0..4 {
            reg = reg.hadamard(q).unwrap();
        }
        let expected = AmplitudeRegister::uniform(4).unwrap();
        for (a, b) in reg.amplitudes().iter().zip(expected.amplitudes()) {
            assert_close(*a, *b, 1e-15);
        }
    }

    #[test]
    fn phase_shift_identity_and_pi() {
        let reg = AmplitudeRegister::uniform(2).unwrap();
        let id = reg.phase_shift(&PhaseShift::new(vec![0.0; 4])).unwrap();
        for (a, b) in id.amplitudes().iter().zip(reg.amplitudes()) {
            assert_close(*a, *b, 1e-15);
        }

        let flipped = reg
            .phase_shift(&PhaseShift::new(vec![0.0, std::f64::consts::PI, 0.0, 0.0]))
            .unwrap();
        assert_close(flipped.amplitude(0), Complex64::new(0.5, 0.0), 1e-15);
        assert_close(flipped.amplitude(1), Complex64::new(-0.5, 0.0), 1e-15);
        assert_close(flipped.amplitude(2), Complex64::new(0.5, 0.0), 1e-15);
        assert_close(flipped.amplitude(3), Complex64::new(0.5, 0.0), 1e-15);
    }

    #[test]
    fn phase_shift_dimension_mismatch() {
        let reg = AmplitudeRegister::uniform(2).unwrap();
        assert_eq!(
            reg.phase_shift(&PhaseShift::new(vec![0.0; 3])),
            Err(QuantumError::DimensionMismatch {
                expected: 4,
                found: 3
            })
        );
    }

    #[test]
    fn oracle_reflection_flips_one_sign() {
        let reg = AmplitudeRegister::uniform(2).unwrap();
        let reflected = reg.oracle_reflection(2).unwrap();
        assert_close(reflected.amplitude(0), Complex64::new(0.5, 0.0), 1e-15);
        assert_close(reflected.amplitude(1), Complex64::new(0.5, 0.0), 1e-15);
        assert_close(reflected.amplitude(2), Complex64::new(-0.5, 0.0), 1e-15);
        assert_close(reflected.amplitude(3), Complex64::new(0.5, 0.0), 1e-15);

        let twice = reflected.oracle_reflection(2).unwrap();
        assert_eq!(twice, reg);

        assert_eq!(
            reg.oracle_reflection(4),
            Err(QuantumError::IndexOutOfRange { index: 4, dim: 4 })
        );
    }

    #[test]
    fn reflection_about_own_axis_is_identity() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let reg = random_register(&mut rng, 3);
        let out = reg.reflect_about(&reg).unwrap();
        for (a, b) in out.amplitudes().iter().zip(reg.amplitudes()) {
            assert_close(*a, *b, 1e-12);
        }
    }

    #[test]
    fn reflection_about_uniform_matches_dense_matrix() {
        // Expected value computed by explicit 4x4 matrix application of
        // 2|u><u| - I to (1,0,0,0): first entry 2*(1/4) - 1 = -1/2, rest 1/2.
        let axis = AmplitudeRegister::uniform(2).unwrap();
        let input = AmplitudeRegister::basis(2, 0).unwrap();
        let expected = dense::apply(
            &dense::reflection_about(axis.amplitudes()),
            input.amplitudes(),
        );
        assert_close(expected[0], Complex64::new(-0.5, 0.0), 1e-15);
        assert_close(expected[1], Complex64::new(0.5, 0.0), 1e-15);
        assert_close(expected[2], Complex64::new(0.5, 0.0), 1e-15);
        assert_close(expected[3], Complex64::new(0.5, 0.0), 1e-15);

        let out = input.reflect_about(&axis).unwrap();
        for (a, b) in out.amplitudes().iter().zip(&expected) {
            assert_close(*a, *b, 1e-15);
        }
        // A reflection preserves the norm.
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reflection_negates_orthogonal_input() {
        let axis = AmplitudeRegister::from_real(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        let input = AmplitudeRegister::from_real(&[1.0, -1.0, 0.0, 0.0]).unwrap();
        let out = input.reflect_about(&axis).unwrap();
        for (a, b) in out.amplitudes().iter().zip(input.amplitudes()) {
            assert_close(*a, -*b, 1e-12);
        }
    }

    #[test]
    fn reflection_rejects_unnormalized_axis() {
        let reg = AmplitudeRegister::uniform(2).unwrap();
        let bad_axis = AmplitudeRegister {
            n_qubits: 2,
            amplitudes: vec![Complex64::new(0.5, 0.0); 4]
                .into_iter()
                .map(|a| a * 1.001)
                .collect(),
        };
        assert!(matches!(
            reg.reflect_about(&bad_axis),
            Err(QuantumError::InvalidAxis { .. })
        ));

        let small = AmplitudeRegister::uniform(1).unwrap();
        assert_eq!(
            reg.reflect_about(&small),
            Err(QuantumError::DimensionMismatch {
                expected: 4,
                found: 2
            })
        );
    }

    #[test]
    fn grover_identity_at_zero_iterations() {
        let reg = AmplitudeRegister::uniform(3).unwrap();
        assert_eq!(reg.grover_update(5, 0).unwrap(), reg);
    }

    #[test]
    fn grover_two_qubits_one_shot_is_exact() {
        // sin(3 * arcsin(1/2)) = sin(pi/2) = 1: one iteration fully
        // concentrates a uniform 2-qubit register.
        for target in 0..4 {
            let reg = AmplitudeRegister::uniform(2).unwrap();
            let out = reg.grover_update(target, 1).unwrap();
            let probs = out.probabilities();
            assert!((probs[target] - 1.0).abs() < 1e-12);
            for (i, p) in probs.iter().enumerate() {
                if i != target {
                    assert!(*p < 1e-12);
                }
            }
            // Cross-check against the explicit matrix product.
            let brute = grover_by_matrix(&reg, target, 1);
            for (a, b) in out.amplitudes().iter().zip(&brute) {
                assert_close(*a, *b, 1e-12);
            }
        }
    }

    #[test]
    fn grover_three_qubits_matches_triple_angle() {
        // sin(3θ) = 3 sinθ − 4 sin³θ with sinθ = 1/√8 gives 5/(4√2).
        let reg = AmplitudeRegister::uniform(3).unwrap();
        let target = 6;
        let out = reg.grover_update(target, 1).unwrap();
        let expected = 5.0 / (4.0 * 2f64.sqrt());
        assert!((out.amplitude(target).re - expected).abs() < 1e-12);

        let brute = grover_by_matrix(&reg, target, 1);
        for (a, b) in out.amplitudes().iter().zip(&brute) {
            assert_close(*a, *b, 1e-12);
        }
    }

    #[test]
    fn grover_guards() {
        let reg = AmplitudeRegister::uniform(2).unwrap();
        assert_eq!(
            reg.grover_update(4, 1),
            Err(QuantumError::IndexOutOfRange { index: 4, dim: 4 })
        );
        // Cap for 2 qubits is 10 * 2^1 = 20.
        assert!(reg.grover_update(0, 20).is_ok());
        assert_eq!(
            reg.grover_update(0, 21),
            Err(QuantumError::ExcessiveIterations {
                l: 21,
                cap: 20,
                n_qubits: 2
            })
        );
    }

    #[test]
    fn closed_form_basics() {
        let (s, c) = closed_form_amplitude(0.5f64.asin(), 1);
        assert!((s - 1.0).abs() < 1e-12);
        assert!(c.abs() < 1e-12);

        let beta = 0.3;
        let (s0, c0) = closed_form_amplitude(beta, 0);
        assert!((s0 - beta.sin()).abs() < 1e-15);
        assert!((c0 - beta.cos()).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_simulation_past_the_right_angle() {
        // L = 2 on a uniform 3-qubit register pushes (2L+1)β beyond π/2; the
        // rotation law still matches the simulated operator exactly.
        let reg = AmplitudeRegister::uniform(3).unwrap();
        let beta = (1.0 / 8f64.sqrt()).asin();
        let (expected, _) = closed_form_amplitude(beta, 2);
        let out = reg.grover_update(3, 2).unwrap();
        assert!((out.amplitude(3).re - expected).abs() < 1e-10);
    }

    #[test]
    fn probabilities_of_uniform_and_basis() {
        let uniform = AmplitudeRegister::uniform(2).unwrap();
        for p in uniform.probabilities() {
            assert!((p - 0.25).abs() < 1e-15);
        }

        let basis = AmplitudeRegister::basis(3, 5).unwrap();
        let probs = basis.probabilities();
        for (i, p) in probs.iter().enumerate() {
            let expected = if i == 5 { 1.0 } else { 0.0 };
            assert!((p - expected).abs() < 1e-15);
        }

        let amplified = uniform.grover_update(1, 1).unwrap();
        let probs = amplified.probabilities();
        assert!((probs[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measure_one_hot_is_deterministic() {
        let reg = AmplitudeRegister::basis(2, 3).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(reg.measure(&mut rng).unwrap(), 3);
        }
    }

    #[test]
    fn measure_rejects_zero_register() {
        let reg = AmplitudeRegister {
            n_qubits: 1,
            amplitudes: vec![Complex64::ZERO; 2],
        };
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        assert_eq!(reg.measure(&mut rng), Err(QuantumError::DegenerateState));
    }

    #[test]
    fn measure_frequencies_track_probabilities() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let uniform = AmplitudeRegister::uniform(2).unwrap();
        let mut counts = [0usize; 4];
        let draws = 100_000;
        for _ in 0..draws {
            counts[uniform.measure(&mut rng).unwrap()] += 1;
        }
        for count in counts {
            let freq = count as f64 / draws as f64;
            assert!((freq - 0.25).abs() < 0.01, "freq {freq}");
        }

        let skewed = AmplitudeRegister::from_amplitudes(vec![
            Complex64::new(0.9f64.sqrt(), 0.0),
            Complex64::new(0.1f64.sqrt(), 0.0),
        ])
        .unwrap();
        let mut zeros = 0usize;
        for _ in 0..draws {
            if skewed.measure(&mut rng).unwrap() == 0 {
                zeros += 1;
            }
        }
        let freq = zeros as f64 / draws as f64;
        assert!((freq - 0.9).abs() < 0.01, "freq {freq}");
    }

    #[test]
    fn norm_drift_stays_tiny_over_long_compositions() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let mut reg = random_register(&mut rng, 3);
        let axis = random_register(&mut rng, 3);
        for step in 0..10_000usize {
            reg = match step % 4 {
                0 => reg.hadamard(step % 3).unwrap(),
                1 => {
                    let phases: Vec<f64> = (0..8).map(|_| rng.random::<f64>() * 6.0).collect();
                    reg.phase_shift(&PhaseShift::new(phases)).unwrap()
                }
                2 => reg.oracle_reflection(step % 8).unwrap(),
                _ => reg.reflect_about(&axis).unwrap(),
            };
        }
        assert!((reg.norm_sqr() - 1.0).abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn phase_shift_preserves_probabilities(seed in 0u64..1000, n in 1usize..4) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let reg = random_register(&mut rng, n);
            let phases: Vec<f64> = (0..reg.dim())
                .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
                .collect();
            let shifted = reg.phase_shift(&PhaseShift::new(phases)).unwrap();
            for (before, after) in reg.amplitudes().iter().zip(shifted.amplitudes()) {
                prop_assert!((before.norm() - after.norm()).abs() <= 1e-15);
            }
        }

        #[test]
        fn hadamard_is_an_involution(seed in 0u64..500, n in 1usize..5) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let reg = random_register(&mut rng, n);
            let qubit = (seed as usize) % n;
            let back = reg.hadamard(qubit).unwrap().hadamard(qubit).unwrap();
            for (a, b) in reg.amplitudes().iter().zip(back.amplitudes()) {
                prop_assert!((a - b).norm() <= 1e-12);
            }
        }

        #[test]
        fn oracle_reflection_equals_pi_phase_shift(seed in 0u64..500, n in 1usize..4) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let reg = random_register(&mut rng, n);
            let target = (seed as usize) % reg.dim();
            let reflected = reg.oracle_reflection(target).unwrap();
            let shift = PhaseShift::single(reg.dim(), target, std::f64::consts::PI).unwrap();
            let shifted = reg.phase_shift(&shift).unwrap();
            for (a, b) in reflected.amplitudes().iter().zip(shifted.amplitudes()) {
                prop_assert!((a - b).norm() <= 1e-15);
            }
        }

        #[test]
        fn uniform_axis_reflection_is_inversion_about_mean(seed in 0u64..500, n in 1usize..4) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let reg = random_register(&mut rng, n);
            let axis = AmplitudeRegister::uniform(n).unwrap();
            let reflected = reg.reflect_about(&axis).unwrap();
            let mean: Complex64 =
                reg.amplitudes().iter().sum::<Complex64>() / reg.dim() as f64;
            for (out, before) in reflected.amplitudes().iter().zip(reg.amplitudes()) {
                prop_assert!((out - (2.0 * mean - before)).norm() <= 1e-12);
            }
        }

        #[test]
        fn grover_rotation_law_on_nonnegative_registers(
            seed in 0u64..300,
            n in 1usize..4,
            l in 0usize..4,
        ) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let dim = 1usize << n;
            let raw: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() + 0.01).collect();
            let reg = AmplitudeRegister::from_real(&raw).unwrap();
            let target = (seed as usize) % dim;
            let beta = reg.amplitude(target).re.asin();
            // Stay within the monotone quarter turn.
            prop_assume!((2 * l + 1) as f64 * beta <= std::f64::consts::FRAC_PI_2);
            let out = reg.grover_update(target, l).unwrap();
            let (expected, _) = closed_form_amplitude(beta, l);
            prop_assert!((out.amplitude(target).re - expected).abs() <= 1e-10);
            if l >= 1 {
                // One in-range kick strictly increases the taken action's mass.
                prop_assert!(
                    out.probabilities()[target] > reg.probabilities()[target]
                );
            }
        }

        #[test]
        fn gates_preserve_the_norm(seed in 0u64..500, n in 1usize..4) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let reg = random_register(&mut rng, n);
            let h = reg.hadamard((seed as usize) % n).unwrap();
            prop_assert!((h.norm_sqr() - 1.0).abs() <= 1e-12);
            let o = reg.oracle_reflection((seed as usize) % reg.dim()).unwrap();
            prop_assert!((o.norm_sqr() - 1.0).abs() <= 1e-12);
            let r = reg.reflect_about(&AmplitudeRegister::uniform(n).unwrap()).unwrap();
            prop_assert!((r.norm_sqr() - 1.0).abs() <= 1e-12);
        }
    }
}
