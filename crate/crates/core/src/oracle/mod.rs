//! Brute-force numerical bounds that check the closed forms independently.
//!
//! The fiber searches and decomposition searches are minimizations, so their
//! results are upper bounds on the true minima; the witness search is a
//! maximization and gives a lower bound. None of them use the structure that
//! the closed forms rely on.

mod decomposition;
mod fiber_search;
mod witness_search;

pub use decomposition::{recombine, roof_upper_bound_by_decompositions, DecompositionElement};
pub use fiber_search::{min_on_iso_fiber, min_on_werner_fiber};
pub use witness_search::witness_oracle;

use crate::error::{domain, Result};
use crate::exec::Execution;
use crate::qcore::SchmidtVector;

/// Work limits and randomness of an oracle search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    pub restarts: usize,
    /// Iterations per restart.
    pub iterations: usize,
    pub seed: u64,
    pub initial_step: f64,
    /// Factor applied to the step when a trial step fails.
    pub decay: f64,
    pub execution: Execution,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            restarts: 64,
            iterations: 2000,
            seed: 0,
            initial_step: 0.1,
            decay: 0.5,
            execution: Execution::default(),
        }
    }
}

impl SearchBudget {
    pub fn new(restarts: usize, iterations: usize, seed: u64) -> Self {
        SearchBudget {
            restarts,
            iterations,
            seed,
            ..SearchBudget::default()
        }
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.iterations == 0 {
            return domain("search budget needs positive restarts and iterations");
        }
        if !(self.initial_step.is_finite() && self.initial_step > 0.0) {
            return domain(format!("initial step {} must be positive", self.initial_step));
        }
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return domain(format!("decay factor {} must lie in (0, 1)", self.decay));
        }
        Ok(())
    }
}

/// The point at which an oracle attained its value.
#[derive(Debug, Clone, PartialEq)]
pub enum Argmin {
    Schmidt(SchmidtVector),
    Decomposition(Vec<DecompositionElement>),
}

/// Best value found by an oracle search.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    pub argmin: Argmin,
    /// `value − closed form`, once a closed form has been supplied.
    pub gap_to_closed_form: Option<f64>,
    /// Largest constraint violation at the reported point.
    pub max_violation: f64,
}

impl OracleEstimate {
    pub fn with_closed_form(mut self, closed_form: f64) -> Self {
        self.gap_to_closed_form = Some(self.value - closed_form);
        self
    }

    pub fn schmidt(&self) -> Option<&SchmidtVector> {
        match &self.argmin {
            Argmin::Schmidt(s) => Some(s),
            Argmin::Decomposition(_) => None,
        }
    }
}

/// Index-ordered reduction that keeps the first of equal values.
pub(crate) fn best_by<T>(items: Vec<T>, key: impl Fn(&T) -> f64, minimize: bool) -> Option<T> {
    let mut best: Option<(f64, T)> = None;
    for item in items {
        let k = key(&item);
        if !k.is_finite() {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bk, _)) => {
                if minimize {
                    k < *bk
                } else {
                    k > *bk
                }
            }
        };
        if better {
            best = Some((k, item));
        }
    }
    best.map(|(_, item)| item)
}
