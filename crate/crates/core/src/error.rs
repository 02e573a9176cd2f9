use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid camera: {0}")]
    InvalidCamera(String),

    #[error("point lies at or behind the camera plane (view depth {depth})")]
    BehindCamera { depth: f64 },

    #[error("projected bounds fall entirely outside the image")]
    OffScreen,

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid render settings: {0}")]
    InvalidSettings(String),

    #[error("inconsistent scene: {0}")]
    InconsistentScene(String),

    #[error("{} image id(s) appear in both the real and sim pools, e.g. {}", .0.len(), .0.first().map(String::as_str).unwrap_or(""))]
    SharedImageIds(Vec<String>),

    #[error("framebuffer dimensions differ: {left:?} vs {right:?}")]
    DimensionMismatch { left: (u32, u32), right: (u32, u32) },

    #[error("insufficient {pool} pool: required {required}, available {available}")]
    Capacity {
        pool: &'static str,
        required: usize,
        available: usize,
    },

    #[error("unknown image ids: {}", .0.join(", "))]
    UnknownImageIds(Vec<String>),

    #[error("{}: {message}", location(.path, *.line))]
    Parse {
        path: PathBuf,
        line: Option<usize>,
        message: String,
    },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", .path.display())]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
}

fn location(path: &std::path::Path, line: Option<usize>) -> String {
    match line {
        Some(line) => format!("{}:{line}", path.display()),
        None => path.display().to_string(),
    }
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(
        path: impl Into<PathBuf>,
        line: Option<usize>,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
