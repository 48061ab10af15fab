//! Command line surface for `tetrapet`: subcommands and SVG rendering.

pub mod commands;
pub mod render;
