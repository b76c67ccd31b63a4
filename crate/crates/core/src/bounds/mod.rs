//! Lower bounds on share complexity: the entropy LP and independent sequences.

mod certificate;
mod certify;
mod lpfile;
mod model;
mod report;
mod simplex;
mod stored;
mod symmetry;

pub use certificate::{certificate_bound, check_certificate, Certificate, CertificateFile};
pub use certify::{
    rationalize, solve_exact, solve_float, solve_guided, verify_dual_certificate, verify_primal, DualCertificate,
    ExactSolution, FloatSolution, SolveMethod, EXACT_VAR_CAP,
};
pub use lpfile::{export_lp, format_solution, load_solution, parse_lp, write_lp, ExternalSolution, SOLUTION_TOLERANCE};
pub use model::{entropy_lp, parse_subset_name, polymatroid_lp, Family, LpModel, Sense, LP_PARTICIPANT_CAP};
pub use report::{
    log_bound_holds, lp_bound, universal_lower_bound, universal_lower_bound_with, universal_lp, BoundReport, LpBound,
};
pub use simplex::simplex_solve;
pub use stored::{stored_reduced_solution, SolutionFile};
pub use symmetry::{reduce_with, symmetry_reduce, Reduction, SymmetryGroup};
