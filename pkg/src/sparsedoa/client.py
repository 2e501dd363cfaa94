"""Thin client for the sparsedoa service.

With no ``base_url`` the client runs the FastAPI app in-process (no
server needed, full request/response serialization still exercised);
with a ``base_url`` it talks to a running instance over HTTP. Service
error payloads are mapped back onto the package's exception types, so
callers see the same errors either way.
"""

import warnings

import httpx

from .errors import InvariantViolation, ParameterError, SparseDoaError

__all__ = ["ServiceClient"]


def _testclient_class():
    # starlette warns about its httpx-based TestClient; the sync in-process
    # transport is exactly what we want, so keep the CLI quiet about it
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="Using `httpx` with `starlette.testclient`")
        from fastapi.testclient import TestClient
    return TestClient


class ServiceClient:
    def __init__(self, base_url: str = None):
        if base_url is None:
            from .service import app

            self._http = _testclient_class()(app, raise_server_exceptions=False)
        else:
            self._http = httpx.Client(base_url=base_url, timeout=httpx.Timeout(None))

    def close(self):
        self._http.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()

    def _request(self, method: str, path: str, payload: dict = None) -> dict:
        response = self._http.request(method, path, json=payload)
        if response.status_code == 200:
            return response.json()
        try:
            body = response.json()
        except ValueError:
            body = {}
        code = body.get("code", "")
        detail = body.get("detail", response.text)
        if response.status_code == 422 or code == "parameter_error":
            raise ParameterError(str(detail))
        if code == "invariant_violation":
            raise InvariantViolation(str(detail))
        raise SparseDoaError(f"service error {response.status_code}: {detail}")

    def health(self) -> dict:
        return self._request("GET", "/health")

    def design(self, design: str, params: dict) -> dict:
        return self._request("POST", "/design", {"design": design, "params": params})

    def coarray(self, array: dict = None, positions: list = None, kind: str = "sdca") -> dict:
        return self._request(
            "POST", "/coarray", {"array": array, "positions": positions, "kind": kind}
        )

    def dof_table(self, budgets: list) -> dict:
        return self._request("POST", "/dof-table", {"budgets": list(budgets)})

    def simulate(self, array: dict, scenario: dict) -> dict:
        return self._request("POST", "/simulate", {"array": array, "scenario": scenario})

    def estimate(self, array: dict, scenario: dict, q: int, grid_step_deg: float = 0.1) -> dict:
        return self._request(
            "POST",
            "/estimate",
            {"array": array, "scenario": scenario, "q": q, "grid_step_deg": grid_step_deg},
        )

    def sweep_snr(self, payload: dict) -> dict:
        return self._request("POST", "/sweep/snr", payload)

    def sweep_snapshots(self, payload: dict) -> dict:
        return self._request("POST", "/sweep/snapshots", payload)
