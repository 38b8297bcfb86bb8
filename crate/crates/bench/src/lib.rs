//! Fixtures shared by the solver benchmarks.

use pgsor_core::problems::generate;
use pgsor_core::spectral::{estimate_spectrum, gsor_optimal_alpha, pgsor_optimal_params};
use pgsor_core::{ExampleId, ParamChoice, PowerOptions, ProblemConfig, ProblemInstance};

/// Generated instance with its optimal GSOR and PGSOR parameters.
pub struct Fixture {
    pub example: ExampleId,
    pub m: usize,
    pub problem: ProblemInstance,
    pub gsor: ParamChoice,
    pub pgsor: ParamChoice,
}

pub fn fixture(example: ExampleId, m: usize) -> Fixture {
    let problem = generate(&ProblemConfig::new(example, m)).expect("built-in examples generate");
    let est = estimate_spectrum(&problem.w, &problem.t, &PowerOptions::default()).expect("W is SPD");
    Fixture {
        example,
        m,
        gsor: gsor_optimal_alpha(est.rho_s()),
        pgsor: pgsor_optimal_params(&est).expect("T is nonzero"),
        problem,
    }
}

impl Fixture {
    pub fn label(&self) -> String {
        format!("ex{}/m{}", self.example, self.m)
    }
}
