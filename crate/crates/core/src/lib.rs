pub mod cli;
pub mod continuation;
pub mod meijer_g;
pub mod quad;
pub mod rk_space;
pub mod specfun;
pub mod topology;
pub mod xprec;
