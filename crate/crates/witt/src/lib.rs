pub mod error;
pub mod fq;
pub mod gr;
pub mod naive;
pub mod poly;
pub mod textio;
pub mod witt;
