pub mod distributions;
pub mod error;
pub mod expansion;
pub mod hermite;
pub mod quadrature;
pub mod scenario;
pub mod transform;
pub mod verify;
pub mod wavelets;
