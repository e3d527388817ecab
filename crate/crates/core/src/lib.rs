pub mod bundles;
pub mod constants;
pub mod count;
pub mod gf;
pub mod linalg;
pub mod motivic;
pub mod p1;
pub mod picard;
pub mod poly;
pub mod sweep;
pub mod verify;
