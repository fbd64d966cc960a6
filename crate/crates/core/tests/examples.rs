//! Every example must run to completion. `cargo test` builds the examples
//! next to the test executables, under target/<profile>/examples.

use std::path::PathBuf;
use std::process::Command;

fn example_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|deps| deps.parent()).unwrap().join("examples")
}

fn run(name: &str) -> String {
    let path = example_dir().join(format!("{name}{}", std::env::consts::EXE_SUFFIX));
    let out = Command::new(&path).output().unwrap_or_else(|e| panic!("cannot start {}: {e}", path.display()));
    assert!(out.status.success(), "{name} failed:\n{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

macro_rules! examples {
    ($($name:ident),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                assert!(!run(stringify!($name)).is_empty());
            }
        )*
    };
}

examples!(
    partition_trace,
    hermite_mehler,
    spectrum,
    zeta,
    trivial_zeros,
    asymptotics,
    eigenfunction,
    b_matrix,
    bargmann,
    model_reduction,
    run_config,
);
