pub mod bounds;
pub mod ff;
pub mod linalg;
pub mod linpoly;
pub mod poly;
pub mod report;
pub mod shifting;
pub mod splitting;
pub mod suite;
pub mod tower;
