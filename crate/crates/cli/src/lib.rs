//! Library half of the `recurprimes` command-line tool: subcommand execution,
//! report rendering, parallel prime-window sharding, and the verification
//! suites the `verify` subcommand bundles.

pub mod exec;
pub mod report;
pub mod shard;
pub mod suites;
