pub mod bb84;
pub mod channels;
pub mod linalg;
pub mod optimizer;
pub mod relativity;
pub mod sampling;
