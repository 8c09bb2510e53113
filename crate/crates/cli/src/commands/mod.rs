pub mod calibrate;
pub mod design;
pub mod duffing;
pub mod fit;
pub mod loss;
pub mod mb_fit;
pub mod ringdown;
pub mod sweep;
pub mod telegraph;
pub mod two_tone;
