use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report. Variants split into input-validation
/// failures and numerical failures, see [`Error::is_validation`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("GammaOutOfRange: anisotropy gamma = {0} must lie in [0, 1]")]
    GammaOutOfRange(f64),
    #[error("LambdaNonPositive: reduced coupling lambda = {0} must be > 0")]
    LambdaNonPositive(f64),
    #[error("LatticeTooSmall: {sites} sites given, at least {min} required")]
    LatticeTooSmall { sites: usize, min: usize },
    #[error("LatticeTooLarge: {sites} sites given, dense cap is {cap}")]
    LatticeTooLarge { sites: usize, cap: usize },
    #[error("SiteOutOfRange: operator acts on site {site} of a {sites}-site chain")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),
    #[error("InsufficientPoints: {got} points given, {need} required")]
    InsufficientPoints { got: usize, need: usize },
    #[error("WindowViolation: {0}")]
    WindowViolation(String),
    #[error("DiagonalizationFailure: {0}")]
    DiagonalizationFailure(String),
    #[error("NonHermitianResult: expectation value has imaginary part {imag:e}")]
    NonHermitianResult { imag: f64 },
    #[error("TranslationInvarianceViolation: {name} varies by {spread:e} across sites")]
    TranslationInvarianceViolation { name: &'static str, spread: f64 },
    #[error("QuadratureNonConvergence: error estimate {error:e} after {subdivisions} subdivisions")]
    QuadratureNonConvergence { error: f64, subdivisions: usize },
    #[error("StepCrossesCriticalPoint: lambda = {lambda} with step {step} reaches lambda_c = 1")]
    StepCrossesCriticalPoint { lambda: f64, step: f64 },
    #[error("PrecisionLoss: derivative error estimate {error:e} exceeds {limit:e}")]
    PrecisionLoss { error: f64, limit: f64 },
}

impl Error {
    /// True for errors caused by bad input rather than by a numerical routine.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::GammaOutOfRange(_)
                | Error::LambdaNonPositive(_)
                | Error::LatticeTooSmall { .. }
                | Error::LatticeTooLarge { .. }
                | Error::SiteOutOfRange { .. }
                | Error::InvalidArgument(_)
                | Error::InsufficientPoints { .. }
                | Error::WindowViolation(_)
                | Error::StepCrossesCriticalPoint { .. }
        )
    }
}
