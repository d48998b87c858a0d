//! Runs every example so they cannot rot.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run().expect("example runs");
        }
    };
}

example!(eigenvalues);
example!(multigrid);
example!(polynomials);
example!(reproduce);
example!(smoothing_factor);
example!(triangular);
example!(two_grid);
