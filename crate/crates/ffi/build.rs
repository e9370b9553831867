fn main() {
    println!("cargo:rerun-if-changed=build.rs");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    #[cfg(feature = "generate-header")]
    {
        let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
        let bindings = cbindgen::generate(&crate_dir).expect("cbindgen generation failed");
        bindings.write_to_file(format!("{crate_dir}/include/sadfo.h"));
    }
}
