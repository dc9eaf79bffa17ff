fn main() {
    let env_seed = std::env::var(pulsedistill::cli::SEED_ENV).ok();
    std::process::exit(pulsedistill::cli::run(std::env::args_os(), env_seed.as_deref()));
}
