//! Per-state action registers: the policy memory of the amplitude-amplified
//! agent.

use super::RlError;
use crate::quantum::AmplitudeRegister;
use rand::Rng;
use std::collections::BTreeMap;

/// A map from state to its action register f(s).
///
/// Each register spans ⌈log₂(action count)⌉ qubits (at least one). When the
/// action count is not a power of two the register carries spare basis
/// states; sampling rejects those, which conditions the Born distribution on
/// the valid actions.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionPolicyTable<S: Copy + Ord + std::fmt::Debug> {
    registers: BTreeMap<S, AmplitudeRegister>,
    action_count: usize,
}

impl<S: Copy + Ord + std::fmt::Debug> ActionPolicyTable<S> {
    /// Every state starts at the equal superposition over its register.
    pub fn uniform(
        states: impl IntoIterator<Item = S>,
        action_count: usize,
    ) -> Result<Self, RlError> {
        let n_qubits = action_qubits(action_count);
        let registers = states
            .into_iter()
            .map(|s| Ok((s, AmplitudeRegister::uniform(n_qubits)?)))
            .collect::<Result<_, RlError>>()?;
        Ok(Self {
            registers,
            action_count,
        })
    }

    pub fn action_count(&self) -> usize {
        self.action_count
    }

    pub fn n_qubits(&self) -> usize {
        action_qubits(self.action_count)
    }

    pub fn len(&self) -> usize {
        self.registers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.registers.is_empty()
    }

    pub fn register(&self, state: S) -> Result<&AmplitudeRegister, RlError> {
        self.registers
            .get(&state)
            .ok_or_else(|| RlError::MissingState(format!("{state:?}")))
    }

    pub fn registers(&self) -> impl Iterator<Item = (&S, &AmplitudeRegister)> {
        self.registers.iter()
    }

    /// Replaces a state's register, e.g. to seed a hand-built policy. The
    /// replacement must span the same number of qubits.
    pub fn set_register(
        &mut self,
        state: S,
        register: AmplitudeRegister,
    ) -> Result<(), RlError> {
        let expected = self.n_qubits();
        if register.n_qubits() != expected {
            return Err(RlError::Quantum(
                crate::quantum::QuantumError::DimensionMismatch {
                    expected: 1 << expected,
                    found: register.dim(),
                },
            ));
        }
        let slot = self
            .registers
            .get_mut(&state)
            .ok_or_else(|| RlError::MissingState(format!("{state:?}")))?;
        *slot = register;
        Ok(())
    }

    /// Collapse-inspired selection: sample an action index from |C_a|²
    /// without mutating the stored register.
    pub fn sample_action<R: Rng + ?Sized>(&self, state: S, rng: &mut R) -> Result<usize, RlError> {
        let register = self.register(state)?;
        loop {
            let index = register.measure(rng)?;
            if index < self.action_count {
                return Ok(index);
            }
        }
    }

    /// The most probable valid action, ties broken by lowest index.
    pub fn greedy_action(&self, state: S) -> Result<usize, RlError> {
        let probs = self.register(state)?.probabilities();
        let mut best = 0usize;
        for (index, p) in probs.iter().enumerate().take(self.action_count).skip(1) {
            if *p > probs[best] {
                best = index;
            }
        }
        Ok(best)
    }

    /// Applies `l` Grover iterations toward `action` on the state's register.
    pub fn reinforce(&mut self, state: S, action: usize, l: usize) -> Result<(), RlError> {
        let register = self
            .registers
            .get_mut(&state)
            .ok_or_else(|| RlError::MissingState(format!("{state:?}")))?;
        *register = register.grover_update(action, l)?;
        Ok(())
    }
}

fn action_qubits(action_count: usize) -> usize {
    debug_assert!(action_count >= 1);
    (usize::BITS - action_count.saturating_sub(1).leading_zeros()).max(1) as usize
}
