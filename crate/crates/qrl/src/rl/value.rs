//! State-value tables, the TD(0) update rule, the convergence test, and an
//! exact policy-evaluation solver used as a test oracle.

use super::RlError;
use std::collections::BTreeMap;

/// A map from state to its estimated value V(s).
///
/// Backed by an ordered map so that iteration order, and therefore every
/// downstream artifact, is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable<S: Copy + Ord + std::fmt::Debug> {
    values: BTreeMap<S, f64>,
}

impl<S: Copy + Ord + std::fmt::Debug> ValueTable<S> {
    /// V(s) = 0 for every given state.
    pub fn zeros(states: impl IntoIterator<Item = S>) -> Self {
        Self {
            values: states.into_iter().map(|s| (s, 0.0)).collect(),
        }
    }

    pub fn get(&self, state: S) -> Result<f64, RlError> {
        self.values
            .get(&state)
            .copied()
            .ok_or_else(|| RlError::MissingState(format!("{state:?}")))
    }

    pub fn set(&mut self, state: S, value: f64) {
        self.values.insert(state, value);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, &f64)> {
        self.values.iter()
    }
}

/// One TD(0) update: V(s) ← V(s) + α(r + γV(s') − V(s)).
///
/// A terminal transition bootstraps V(s') as zero. Returns the signed change
/// applied to V(s).
pub fn td_update<S: Copy + Ord + std::fmt::Debug>(
    values: &mut ValueTable<S>,
    state: S,
    reward: f64,
    next_state: S,
    terminal: bool,
    alpha: f64,
    gamma: f64,
) -> Result<f64, RlError> {
    let bootstrap = if terminal { 0.0 } else { values.get(next_state)? };
    let current = values.get(state)?;
    let delta = alpha * (reward + gamma * bootstrap - current);
    values.set(state, current + delta);
    Ok(delta)
}

/// True iff every recorded per-state |ΔV| is at most `epsilon_v`.
///
/// States not visited during the episode contribute Δ = 0, so an empty set
/// of deltas converges vacuously.
pub fn check_convergence(deltas: impl IntoIterator<Item = f64>, epsilon_v: f64) -> bool {
    deltas.into_iter().all(|d| d.abs() <= epsilon_v)
}

/// A finite chain under a fixed policy: for each state, either the policy
/// transition `(next_state, reward)` or `None` for absorbing states.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyChain {
    transitions: Vec<Option<(usize, f64)>>,
}

impl PolicyChain {
    pub fn new(transitions: Vec<Option<(usize, f64)>>) -> Self {
        for (next, _) in transitions.iter().flatten() {
            assert!(*next < transitions.len(), "transition target out of range");
        }
        Self { transitions }
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }
}

/// Exact policy evaluation by direct linear solve of V = r + γPV.
///
/// Absorbing states are pinned at V = 0. Fails when the system is singular,
/// e.g. γ = 1 on a chain with a cycle that never absorbs.
pub fn bellman_solve(chain: &PolicyChain, gamma: f64) -> Result<Vec<f64>, RlError> {
    let n = chain.len();
    let mut matrix = vec![vec![0.0f64; n]; n];
    let mut rhs = vec![0.0f64; n];
    for (s, transition) in chain.transitions.iter().enumerate() {
        match transition {
            Some((next, reward)) => {
                matrix[s][s] += 1.0;
                matrix[s][*next] -= gamma;
                rhs[s] = *reward;
            }
            None => {
                matrix[s][s] = 1.0;
                rhs[s] = 0.0;
            }
        }
    }
    solve_dense(matrix, rhs)
}

/// Gaussian elimination with partial pivoting; small systems only.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>, RlError> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| a[r1][col].abs().total_cmp(&a[r2][col].abs()))
            .expect("non-empty range");
        if a[pivot_row][col].abs() < 1e-12 {
            return Err(RlError::SingularSystem);
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let (upper, lower) = a.split_at_mut(col + 1);
        let pivot = &upper[col];
        for (offset, row) in lower.iter_mut().enumerate() {
            let factor = row[col] / pivot[col];
            if factor == 0.0 {
                continue;
            }
            for (entry, pivot_entry) in row.iter_mut().zip(pivot).skip(col) {
                *entry -= factor * pivot_entry;
            }
            b[col + 1 + offset] -= factor * b[col];
        }
    }
    let mut x = vec![0.0f64; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for col in (row + 1)..n {
            acc -= a[row][col] * x[col];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}
