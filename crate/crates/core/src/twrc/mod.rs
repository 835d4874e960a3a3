//! Achievable rate regions on the Gaussian two-way relay channel.
//!
//! Each user splits its message into a common part that both the relay
//! and the other user decode, a part decoded only by the relay and
//! forwarded as a bin index, and a private part that the relay compresses
//! in two layers. One destination decodes both compression layers, the
//! other only the coarse one; exchanging the roles gives a second region
//! and time sharing the convex hull of both.

mod constraints;
mod params;
mod schemes;
mod signaling;

pub use constraints::{
    constraint_set, constraint_set_for, polytopes, region_bounds, region_for_params, ConstraintSet,
    LayerAssignment, RATE_CAP,
};
pub use params::{Scheme, TwrcParams};
pub use schemes::{
    boundary_weights, combined_region, lnnc_region, rankov_df_region, scheme_regions,
    silenced_channel, silenced_user2_rate, sum_rate, sum_rates, trace_region, twrc_cutset_bound,
    weighted_rate, xie_df_region, SchemeRegions, TracedRegion, DEFAULT_WEIGHTS,
};
pub use signaling::{build_signaling, Roles, Signaling, SOURCE_COUNT};
