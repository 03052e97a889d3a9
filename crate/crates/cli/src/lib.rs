//! Front end for the `quadfun` library: the text format for presquare and square
//! groups, the command dispatcher and the `verify` driver.

pub mod app;
pub mod format;
pub mod verify;
