//! Exact arithmetic substrate: rationals, polynomials and real roots.

pub mod poly;
pub mod rational;
pub mod roots;

pub use poly::{poly_gcd, poly_inv_mod, squarefree_factor, squarefree_part, Polynomial};
pub use rational::{format_rational, int, parse_rational, ratio, Rational};
pub use roots::{
    compare_roots, default_budget, order_roots, isolate_real_roots, refine_root, Domain, IsolatingInterval,
    RealRoot, RootList, RootValue,
};
