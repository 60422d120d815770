use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {location}: {message}", path.display())]
    Parse {
        path: PathBuf,
        location: String,
        message: String,
    },

    #[error("duplicate author id `{0}`")]
    DuplicateAuthor(String),

    #[error("team `{paper_id}` references unknown author `{author_id}`")]
    UnknownAuthor { paper_id: String, author_id: String },

    #[error("team `{0}` has no members")]
    EmptyTeam(String),

    #[error("author `{0}` has no positive publication count")]
    NoPublications(String),

    #[error("author `{0}`: first_year is after last_year")]
    YearOrder(String),

    #[error("discipline `{0}` is not in the discipline index")]
    UnknownDiscipline(String),

    #[error("discipline index: {0}")]
    Index(String),

    #[error("normalized entropy needs at least two disciplines")]
    SingleDiscipline,

    #[error("node `{0}` is not in the graph")]
    UnknownNode(String),

    #[error("no discipline vector for node `{0}`")]
    MissingVector(String),

    #[error("team size {size} exceeds population of {population} authors")]
    TeamTooLarge { size: usize, population: usize },

    #[error("null ensemble needs at least 2 simulations, got {0}")]
    TooFewSimulations(usize),

    #[error("null ensemble has no entry for team size {0}")]
    MissingTeamSize(usize),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("{0} group is empty")]
    EmptyGroup(&'static str),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("report has no `{0}` section")]
    MissingSection(&'static str),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Errors caused by unreadable or malformed input files.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Io { .. } | Error::Parse { .. } => true,
            Error::Stage { source, .. } => source.is_input_error(),
            _ => false,
        }
    }

    pub(crate) fn in_stage(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }
}
