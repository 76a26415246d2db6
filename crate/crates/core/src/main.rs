fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SPTO_LOG", "warn")).init();
    let code = std::panic::catch_unwind(|| spto::cli::run(std::env::args_os())).unwrap_or(2);
    std::process::exit(code);
}
