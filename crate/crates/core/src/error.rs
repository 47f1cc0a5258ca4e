use thiserror::Error;

/// Library-wide error type. The CLI maps each variant onto a distinct
/// exit code, so the taxonomy here is part of the external contract.
#[derive(Debug, Error)]
pub enum Error {
    /// Input text could not be parsed. Carries a 1-based line number
    /// when the source format has one.
    #[error("parse error{}: {msg}", fmt_line(.line))]
    Parse { line: Option<u64>, msg: String },

    /// No side split satisfies the review-load ratio test. `best_ratio`
    /// is the smallest achievable max{p/(m-r), (n-p)/r} over reachable
    /// splits, when any split has a defined ratio at all.
    #[error(
        "no feasible partition: {} (removing high-degree reviewers from the pool may help)",
        match .best_ratio {
            Some(r) => format!("best achievable load ratio {r} exceeds mu/lambda"),
            None => "every reachable split leaves one side without reviewers or papers".to_string(),
        }
    )]
    InfeasiblePartition { best_ratio: Option<f64> },

    /// A structural contract between pipeline stages was violated
    /// (misaligned profile, invalid strategy output, size mismatch).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An exhaustive operation would exceed its enumeration budget.
    /// Callers should fall back to a randomized variant.
    #[error("enumeration budget exceeded: {required} evaluations needed, budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    /// The request falls outside the domain an operation is defined on.
    #[error("{0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn fmt_line(line: &Option<u64>) -> String {
    match line {
        Some(l) => format!(" at line {l}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
