fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("QDYN_LOG", "warn")).init();
    std::process::exit(qdyn::cli::main_with_args(std::env::args_os()));
}
