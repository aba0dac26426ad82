pub mod freewords;
pub mod limits;
pub mod mobius;
pub mod par;
pub mod rational;
pub mod report;
pub mod schottky;
