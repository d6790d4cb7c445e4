"""Base command implementation and registry."""
import logging
import time
from abc import ABC, abstractmethod
from typing import Any, Dict, Type, TypeVar

from forensic_agreement.exceptions import AgreementError, ConfigurationError, ExecutionError, ValidationError
from forensic_agreement.types import CommandResponse, RunConfig
from forensic_agreement.utils import create_metadata

T = TypeVar("T", bound="BaseCommand")

class BaseCommand(ABC):
    """Base class for all CLI subcommands."""

    name: str = ""

    def __init__(self, config: RunConfig) -> None:
        """Initialize the command with its configuration.

        Args:
            config: Validated run configuration

        Raises:
            ConfigurationError: If a field the command needs is missing
        """
        self.config = config
        self._validate_config()

    @abstractmethod
    def _validate_config(self) -> None:
        """Validate the command configuration."""
        pass

    @abstractmethod
    def _run(self) -> Any:
        """Do the command's work and return its stdout text."""
        pass

    def _require(self, *fields: str) -> None:
        for field in fields:
            if getattr(self.config, field) is None:
                raise ConfigurationError(
                    f"{self.name} requires --{field.replace('_', '-')}"
                )

    def _check_paths(self) -> None:
        for path in self.config.input_paths().values():
            if not path.is_file():
                raise FileNotFoundError(2, "no such file", str(path))

    def _invoke(self) -> Any:
        try:
            return self._run()
        except (AgreementError, OSError):
            raise
        except Exception as e:
            logging.error(f"{self.name} execution failed: {str(e)}")
            raise ExecutionError(f"Failed to execute {self.name}: {str(e)}") from e

    def execute(self) -> CommandResponse:
        """Execute the command.

        Returns:
            CommandResponse: stdout text on success, a one-line error otherwise
        """
        start_time = time.time()
        source = self.__class__.__name__
        try:
            self._check_paths()
            data = self._invoke()
        except ValidationError as e:
            logging.error(f"{self.name} rejected its input: {e}")
            return self._failure(str(e), 1, source, start_time)
        except OSError as e:
            message = f"cannot access {e.filename}: {e.strerror}" if e.filename else str(e)
            logging.error(f"{self.name} I/O failure: {message}")
            return self._failure(message, 1, source, start_time)
        except ConfigurationError as e:
            return self._failure(str(e), 2, source, start_time)
        except AgreementError as e:
            logging.error(f"{self.name} failed: {e}")
            return self._failure(str(e), 1, source, start_time)

        return CommandResponse(
            success=True,
            data=data,
            metadata=create_metadata(
                source=source,
                start_time=start_time,
                additional_data={"subcommand": self.name}
            )
        )

    @staticmethod
    def _failure(message: str, exit_code: int, source: str, start_time: float) -> CommandResponse:
        return CommandResponse(
            success=False,
            error=message,
            exit_code=exit_code,
            metadata=create_metadata(
                source=source,
                start_time=start_time,
                additional_data={"error": message}
            )
        )

    @classmethod
    def create(cls: Type[T], **kwargs: Any) -> T:
        """Create a new instance of the command.

        Args:
            **kwargs: RunConfig fields; ``subcommand`` defaults to the command name

        Returns:
            A new instance of the command
        """
        kwargs.setdefault("subcommand", cls.name)
        return cls(config=RunConfig(**kwargs))

class CommandRegistry:
    """Registry for managing subcommands."""

    _commands: Dict[str, Type[BaseCommand]] = {}

    @classmethod
    def register(cls, name: str, command_cls: Type[BaseCommand]) -> None:
        """Register a new command.

        Args:
            name: Subcommand name
            command_cls: Command class to register
        """
        if name in cls._commands:
            raise AgreementError(f"Command '{name}' already registered")
        cls._commands[name] = command_cls

    @classmethod
    def get(cls, name: str) -> Type[BaseCommand]:
        """Get a registered command by name.

        Args:
            name: Subcommand name

        Returns:
            The command class

        Raises:
            AgreementError: If the command is not found
        """
        if name not in cls._commands:
            raise AgreementError(f"Command '{name}' not found")
        return cls._commands[name]

    @classmethod
    def list_commands(cls) -> Dict[str, Type[BaseCommand]]:
        """List all registered commands.

        Returns:
            Dictionary of registered commands
        """
        return cls._commands.copy()

def register_command(command_cls: Type[T]) -> Type[T]:
    """Class decorator registering a command under its ``name``."""
    CommandRegistry.register(command_cls.name, command_cls)
    return command_cls
