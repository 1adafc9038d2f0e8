//! Simulation of magic-state distillation as a dynamical system on the Bloch ball.

pub mod codes;
pub mod gf2;
pub mod pauli;
pub mod states;
pub mod wep;
pub mod circuit;
pub mod protocols;
pub mod dynamics;
pub mod render;
pub mod config;
