use thiserror::Error;

pub type Result<T> = std::result::Result<T, TopoError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopoError {
    #[error("theta = {theta} lies outside the {chart} chart domain [{lo}, {hi}]")]
    ChartDomain {
        chart: &'static str,
        theta: f64,
        lo: f64,
        hi: f64,
    },

    #[error("the origin d = 0 has no eigenvector")]
    Origin,

    #[error("neighbouring states {index} and {next} are orthogonal (|overlap| = {modulus:e})")]
    OrthogonalNeighbors {
        index: usize,
        next: usize,
        modulus: f64,
    },

    #[error("plaquette ({row}, {col}) has flux {flux} within {margin:e} of the branch cut; refine the grid")]
    FluxBranch {
        row: usize,
        col: usize,
        flux: f64,
        margin: f64,
    },

    #[error("metallic configuration: gap closes at ka = {ka} (v = w), eigenstate undefined")]
    GapClosed { ka: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error(
        "eigensolver did not converge for a {dim}x{dim} matrix within {max_iterations} iterations"
    )]
    Convergence { dim: usize, max_iterations: usize },

    #[error("integral {raw} is not within {tolerance:e} of an integer")]
    NotQuantized { raw: f64, tolerance: f64 },
}
