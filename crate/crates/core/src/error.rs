use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("non-finite integrand at node {index} (theta = {theta})")]
    NonFinite { index: usize, theta: f64 },

    /// A parameter violated one of its admissibility inequalities.
    #[error("{key}: {inequality} violated ({detail})")]
    Admissibility {
        key: &'static str,
        inequality: String,
        detail: String,
    },

    #[error("invalid input: {0}")]
    Domain(String),

    #[error("newton stagnated after {iterations} iterations (residual {residual:.3e})")]
    Stagnation { iterations: usize, residual: f64 },

    #[error("newton diverged: {0}")]
    Divergence(String),

    #[error("convexity lost at node {index} (theta = {theta}, radius {radius:.3e})")]
    Convexity {
        index: usize,
        theta: f64,
        radius: f64,
    },

    #[error("line search exhausted after {halvings} halvings at iteration {iteration} (J = {j_value:.6e}, residual {residual:.3e})")]
    StepCollapse {
        iteration: usize,
        halvings: usize,
        j_value: f64,
        residual: f64,
    },

    #[error("constraint projection failed: {0}")]
    Projection(String),

    #[error("minimum ellipsoid inner containment failed at node {index}: h_E/n = {scaled:.6e} > h_K = {support:.6e}")]
    Containment {
        index: usize,
        scaled: f64,
        support: f64,
    },

    #[error("insufficient sweep: {0}")]
    InsufficientSweep(String),

    #[error("{stage} failed at eps = {eps}: {source}")]
    Stage {
        stage: &'static str,
        eps: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("config error at line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn stage(stage: &'static str, eps: f64) -> impl FnOnce(Error) -> Error {
        move |e| Error::Stage {
            stage,
            eps,
            source: Box::new(e),
        }
    }

    /// True for errors caused by the run configuration rather than the computation.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Admissibility { .. } | Error::ConfigParse { .. } | Error::Config(_) => true,
            Error::Stage { source, .. } => source.is_config(),
            _ => false,
        }
    }
}
