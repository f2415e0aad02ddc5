//! Split-greedy construction, exchange search, the horizon-sweeping
//! drivers built on them, and a constructive LPT baseline.

mod ch;
mod convert;
mod eps;
mod exchange;
mod sgh;
mod sgs;
mod timeline;

pub use ch::{ch_j, ch_j_from};
pub use convert::{convert_schedule, ConvertError};
pub use eps::{find_eps, touched_range, update_eps, EpsIndex, EpsKind, EpsRecord};
pub use exchange::{
    evaluate_eps_move, exchange_search, exchange_search_with, passes_bound, EsOptions, EsStats,
    MoveError,
};
pub use sgh::{sgh, sgh_with_rng};
pub use sgs::{sgs, sgs_es, split_greedy_scheduler};
pub use timeline::{Interval, MachineTimeline};
