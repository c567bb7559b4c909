use alloc::string::String;

/// Errors raised by the evaluation core.
///
/// IO-free: every variant describes a contract violation in the data handed
/// to a core operation. File and parse errors live in the std companion crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("pair {pair_id}: span [{token_start}, {token_end}) out of range for {token_count} tokens")]
    SpanOutOfRange {
        pair_id: String,
        token_start: usize,
        token_end: usize,
        token_count: usize,
    },
    #[error("pair {pair_id}: span character range [{char_start}, {char_end}) does not match its tokens [{expected_start}, {expected_end})")]
    SpanCharMismatch {
        pair_id: String,
        char_start: usize,
        char_end: usize,
        expected_start: usize,
        expected_end: usize,
    },
    #[error("pair {pair_id}: spans overlap")]
    OverlappingSpans { pair_id: String },
    #[error("pair {pair_id}: idiom `{idiom_id}` is not in the idiom list")]
    UnknownIdiom { pair_id: String, idiom_id: String },
    #[error("duplicate pair id `{0}`")]
    DuplicatePairId(String),
    #[error("upsample factor must be at least 1, got {0}")]
    InvalidUpsampleFactor(usize),
    #[error("unknown split kind `{0}`")]
    UnknownSplitKind(String),
    #[error("empty idiom phrase")]
    EmptyPhrase,
    #[error("line count mismatch: {source_lines} source lines, {target_lines} target lines")]
    LineCountMismatch {
        source_lines: usize,
        target_lines: usize,
    },
    #[error("no hypothesis for pair `{0}`")]
    MissingHypothesis(String),
    #[error("no {side} alignment for pair `{pair_id}`")]
    MissingAlignment { pair_id: String, side: &'static str },
    #[error("alignment for pair `{pair_id}` does not fit the sentence pair: {reason}")]
    AlignmentMismatch { pair_id: String, reason: String },
    #[error("iterations must be at least 1")]
    ZeroIterations,
    #[error("empty bitext")]
    EmptyBitext,
    #[error("parameter `{name}` must be non-negative, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },
    #[error("empty reference")]
    EmptyReference,
    #[error("length mismatch: {hypotheses} hypotheses, {references} references")]
    LengthMismatch {
        hypotheses: usize,
        references: usize,
    },
    #[error("unknown symmetrization heuristic `{0}`")]
    UnknownHeuristic(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
