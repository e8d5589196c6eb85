pub mod conic;
pub mod eigen;
pub mod mat3;
pub mod point;
pub mod quat;
pub mod symmat;
pub mod vec3;
