pub mod analysis;
pub mod arrangement;
pub mod chambers;
pub mod charpoly;
pub mod exactmath;
pub mod group;
pub mod lp;
pub mod reference;
pub mod report;
pub mod semiorder;
pub mod verify;
