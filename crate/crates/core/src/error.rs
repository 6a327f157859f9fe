use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("budget exceeded: {what} ({actual} > {limit})")]
    Budget {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("cannot compose: target object {left_dst} of the first arrow differs from source object {right_src} of the second")]
    DomainMismatch { left_dst: usize, right_src: usize },
    #[error("object {0} does not exist")]
    InvalidObject(usize),
    #[error("morphism does not belong to hom-set {src}->{dst}")]
    NotInHomSet { src: usize, dst: usize },
    #[error("malformed morphism: {0}")]
    Malformed(String),
    #[error("element {0} is not an idempotent")]
    NotIdempotent(usize),
    #[error("not closed under composition: product of {0} and {1} is missing")]
    NotClosed(usize, usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
