//! File formats, reports, SVG charts and the command-line pipeline on top
//! of [`genepy_core`].

pub mod cli;
pub mod io;
pub mod report;

pub use genepy_core;
