//! Library surface of the `hodgerees` command-line tool: the JSON document
//! model shared by the binary and its integration tests.

pub mod document;
