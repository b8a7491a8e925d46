//! Stderr logging gated by the KDTL_LOG environment variable.

#[derive(PartialEq, PartialOrd, Clone, Copy)]
pub enum Level {
    Quiet = 0,
    Info = 1,
    Debug = 2,
}

pub fn level() -> Level {
    match std::env::var("KDTL_LOG").as_deref() {
        Ok("quiet") => Level::Quiet,
        Ok("debug") => Level::Debug,
        _ => Level::Info,
    }
}

macro_rules! info {
    ($($arg:tt)*) => {
        if crate::logging::level() >= crate::logging::Level::Info {
            eprintln!($($arg)*);
        }
    };
}

macro_rules! debug {
    ($($arg:tt)*) => {
        if crate::logging::level() >= crate::logging::Level::Debug {
            eprintln!($($arg)*);
        }
    };
}

pub(crate) use {debug, info};
