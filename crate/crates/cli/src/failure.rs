use dpcd::DpcdError;

pub const USAGE: u8 = 2;
pub const NUMERIC: u8 = 1;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: USAGE,
            message: message.into(),
        }
    }
}

impl From<DpcdError> for Failure {
    fn from(e: DpcdError) -> Self {
        Failure {
            code: if e.is_usage() { USAGE } else { NUMERIC },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

pub type CliResult<T = ()> = Result<T, Failure>;
