//! Seismic operators: dispersion, power and magnitude, cumulative magnitude,
//! relevance radius, hypocentral displacement, Poisson locations and
//! epicenter spawning.

mod operators;
mod params;
mod spawn;

pub use operators::{
    cumulative_magnitudes, dispersion_counts, displacement_dim_count, ellipse_distance,
    hypocentral_displace, hypocentral_with_noise, magnitude_from_power, normalize_coordinate,
    peak_power, poisson_location, poisson_location_with_draw, radius_from_mean, range_identifier,
    relevance_radius, seismic_power, split_control, CumulativeMagnitudes, Dispersion, PeakPower,
};
pub use params::SeismicParams;
pub use spawn::{
    modal_pmf_ratio, spawn_epicenter, PhiTracker, SpawnContext, Spawned, MAX_PAIR_ATTEMPTS,
};
