//! Paired significance tests and rank tables.

mod rank;
mod wilcoxon;

pub use rank::{average_ranks, rank_table, Direction, RankTable};
pub use wilcoxon::{wilcoxon_signed_rank, Verdict, WilcoxonResult, EXACT_MAX_N};
