use thiserror::Error;

#[derive(Debug, Error)]
pub enum WsdError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("training set is empty")]
    EmptyTraining,

    #[error("invalid fold plan: {0}")]
    Folds(String),

    #[error("schema mismatch: expected {expected}, got {found}")]
    SchemaMismatch { expected: String, found: String },

    #[error("MVDM tables were not built for this exemplar base")]
    MissingMvdmTables,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid generator parameters: {0}")]
    Generator(String),

    #[error("statistics: {0}")]
    Statistics(String),

    #[error("fold {fold}: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: Box<WsdError>,
    },

    #[error("{path}: {source}")]
    Corpus {
        path: String,
        #[source]
        source: Box<WsdError>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, WsdError>;
