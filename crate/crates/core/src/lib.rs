pub mod cache;
pub mod cli;
pub mod combinat;
pub mod exact;
pub mod families;
pub mod identities;
pub mod poly;
pub mod series;
