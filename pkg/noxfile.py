from __future__ import annotations

import nox

nox.options.default_venv_backend = "uv|virtualenv"
nox.options.sessions = ["lint", "type_check", "test"]

PYTHONS = ["3.10", "3.11", "3.12", "3.13", "3.14"]


def sync(session: nox.Session, group: str, *args: str) -> None:
    session.run(
        "uv", "sync", "--active", *args, "--no-dev", "--group", group
    )


@nox.session(python=["3.10"])
def lint(session: nox.Session) -> None:
    sync(session, "lint")
    session.run("uv", "run", "--active", "ruff", "check", "src")


@nox.session(python=["3.10"])
def type_check(session: nox.Session) -> None:
    sync(session, "type")
    session.run("uv", "run", "--active", "mypy", "src")


@nox.session(python=PYTHONS)
def test(session: nox.Session) -> None:
    python_version = f"--python={session.python}"
    sync(session, "test", python_version)
    session.run(
        "uv",
        "run",
        "--active",
        python_version,
        "pytest",
        "-m",
        "not slow",
        "--cov-branch",
        "--cov-report=xml",
        "-n",
        "auto",
    )


@nox.session(python=["3.13"])
def sweep(session: nox.Session) -> None:
    """Seeded sweeps over every theorem, too slow for the default run."""
    sync(session, "test")
    session.run(
        "uv", "run", "--active", "pytest", "-m", "slow", "-n", "auto"
    )


@nox.session(python=["3.13"])
def docs(session: nox.Session) -> None:
    sync(session, "docs")
    session.run("uv", "run", "--active", "mkdocs", "build", "--strict")
