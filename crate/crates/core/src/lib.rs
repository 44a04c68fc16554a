pub mod baseline;
pub mod error;
pub mod gamma;
pub mod harness;
pub mod operator;
pub mod params;
pub mod power_series;
pub mod series;
pub mod sum;
