from cleo.commands.command import Command
from cleo.helpers import option

from kgan.config import load_config
from kgan.diagnostics import GRADCHECK_TOLERANCE, NETWORK_IMAGE_SIZE, failed_checks, run_gradcheck
from kgan.errors import ConfigError, KganError
from .experiment_command import CONFIG_OPTION, EXIT_RUNTIME, EXIT_SUCCESS, EXIT_USAGE


class GradcheckCommand(Command):
    """
    Compares every analytic gradient with central finite differences.

    gradcheck
        { --config= : Experiment config; its image size, teacher seed and conditioning shape the network checks }
        { --seed= : Seed of the random check points }
    """

    name = "gradcheck"
    description = "Compares every analytic gradient with central finite differences"
    options = [
        CONFIG_OPTION,
        option(
            long_name="seed",
            description="Seed of the random check points and sampled components (default: the teacher seed, or 0)",
            flag=False,
            default=None,
        ),
    ]

    def handle(self) -> int:
        seed, image_size, conditioning = 0, NETWORK_IMAGE_SIZE, "image"
        if self.option("config") is not None:
            try:
                config = load_config(self.option("config"))
            except ConfigError as error:
                self.line_error(f"<error>{error}</error>")
                return EXIT_USAGE
            seed, image_size, conditioning = config.teacher.seed, config.data.size, config.teacher.conditioning

        if self.option("seed") is not None:
            try:
                seed = int(self.option("seed"))
            except ValueError:
                self.line_error(f"<error>Option --seed must be an integer, got `{self.option('seed')}`.</error>")
                return EXIT_USAGE

        try:
            results = run_gradcheck(seed=seed, image_size=image_size, conditioning=conditioning)
        except KganError as error:
            self.line_error(f"<error>{error}</error>")
            return EXIT_RUNTIME

        width = max(len(result.name) for result in results)
        for result in results:
            status = "<info>pass</info>" if result.passed else "<error>FAIL</error>"
            self.line(f"{result.name.ljust(width)}  {result.error:.3e}  {status}")

        failures = failed_checks(results)
        self.line(f"{len(results)} checks, {len(failures)} failed (tolerance {GRADCHECK_TOLERANCE:g})")
        if failures:
            self.line_error(f"<error>Gradient check failed for: {', '.join(failures)}</error>")
            return EXIT_RUNTIME
        return EXIT_SUCCESS


__all__ = [
    "GradcheckCommand",
]
