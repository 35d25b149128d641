use alloc::string::String;

/// Errors for graph loading, clique enumeration, energy evaluation and the
/// stochastic machinery. Every guard in the crate reports through this type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("edge list is empty")]
    EmptyEdgeList,
    #[error("line {line}: {msg}")]
    EdgeListParse { line: usize, msg: String },
    #[error("line {line}: self-loop {site} {site}")]
    SelfLoop { line: usize, site: usize },
    #[error("node ids are not contiguous: expected 0..{expected}, missing {missing}")]
    NonContiguousIds { expected: usize, missing: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("unknown builtin graph '{0}'")]
    UnknownBuiltin(String),
    #[error("site {site} out of range for {n} sites")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("clique members must be nonempty")]
    EmptyCliqueMembers,
    #[error("site set is not a clique")]
    NotAClique,
    #[error("estimated clique count {estimate} exceeds guard {guard}")]
    CliqueGuardExceeded { estimate: usize, guard: usize },
    #[error("block sizes must be positive and sum to the site count")]
    BadBlockSizes,
    #[error("edge probabilities must satisfy 0 <= p_out <= p_in <= 1")]
    BadEdgeProbabilities,
    #[error("could not generate a connected graph in {attempts} attempts")]
    ConnectivityUnattainable { attempts: usize },
    #[error("alphabet size must be between 2 and 16, got {0}")]
    BadAlphabetSize(usize),
    #[error("word index {0} is not in the alphabet")]
    WordOutOfRange(usize),
    #[error("word list must be nonempty")]
    EmptyWordList,
    #[error("empty site label in configuration string")]
    EmptyLabel,
    #[error("unknown word letter '{0}' for this alphabet")]
    UnknownLetter(char),
    #[error("configuration has {got} sites, expected {expected}")]
    WrongSiteCount { expected: usize, got: usize },
    #[error("listener weights must be positive and sum to 1")]
    BadListenerWeights,
    #[error("noise level must lie in [0, 1]")]
    BadEpsilon,
    #[error("diverges in limit mode; use finite epsilon")]
    LimitModeDivergence,
    #[error("operation requires finite epsilon mode")]
    FiniteModeRequired,
    #[error("state space of {states} configurations exceeds guard {guard}")]
    StateSpaceTooLarge { states: u128, guard: usize },
    #[error("recorder would store {requested} entries, guard is {guard}")]
    RecorderGuardExceeded { requested: usize, guard: usize },
    #[error("stationary solve did not converge: residual {residual} after {iterations} iterations")]
    NonConvergence { residual: f64, iterations: usize },
    #[error("distributions live on different state spaces ({left} vs {right} states)")]
    MismatchedStateSpaces { left: usize, right: usize },
    #[error("absorption analysis requires epsilon = 0")]
    NoiseMustBeZero,
    #[error("empty experiment: trials must be positive")]
    EmptyExperiment,
    #[error("steps must exceed burn-in")]
    StepsNotAboveBurnin,
    #[error("thinning interval must be at least 1")]
    BadThinning,
    #[error("no multi-name state was visited within the step budget")]
    NoCandidateStates,
    #[error("partitions are over different site universes")]
    MismatchedUniverses,
    #[error("reference partition must cover every site exactly once")]
    BadReferencePartition,
}

pub type Result<T> = core::result::Result<T, Error>;
