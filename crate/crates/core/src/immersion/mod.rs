//! The immersion decision: problem files, verdicts and reports.

mod format;
mod problem;
mod verdict;

pub use format::{
    free_model_from_document, generator_documents, model_document, parse_monomial,
    CohomologyDocument, GeneratorDocument, ProblemDocument, RationalText,
};
pub use problem::{
    assemble_phi, parse_problem, parse_problem_with, problem_from_document, Cohomology,
    ImmersionProblem, ParseOptions,
};
pub use verdict::{
    compare_modes, decide_immersion, decide_with_phi, explain, explain_comparison, ModeComparison,
    ObstructionRow, Verdict,
};

/// Version tag of every JSON document this crate writes.
pub const FORMAT_VERSION: u32 = 1;
