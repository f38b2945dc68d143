fn main() {
    // Exit quietly when stdout is closed early, e.g. when piped into `head`.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    std::process::exit(vlab_cli::run(std::env::args_os()));
}
