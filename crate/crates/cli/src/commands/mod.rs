pub mod growth;
pub mod identity;
pub mod plotdata;
pub mod simulate;
pub mod strichartz;
pub mod sweep;
