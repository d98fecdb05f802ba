"""HTTP/JSON gateway.

A thin translation layer: parse the request, call the owning service, render
the result in canonical JSON. No business rules live here. Domain errors map
to one stable machine-readable code each, with HTTP 400 for validation and
precondition failures, 404 for unknown resources, 409 for conflicts.

All endpoints are async and run on the event loop, so command handling is
naturally serialized per process.
"""

from __future__ import annotations

import json
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .app import SimulatorApp
from .errors import DomainError, InvalidCommand, InvalidTrade, NoClock
from .fmi import ConsentDecision
from .serialization import canonical_dumps, parse_datetime, party_to_json, trade_from_json


def canonical_response(payload: Any, status_code: int = 200) -> Response:
    return Response(
        content=canonical_dumps(payload),
        status_code=status_code,
        media_type="application/json",
    )


async def _json_body(request: Request, error: type[DomainError] = InvalidCommand) -> dict:
    raw = await request.body()
    if not raw:
        return {}
    try:
        data = json.loads(raw)
    except json.JSONDecodeError:
        raise error("request body is not valid JSON")
    if not isinstance(data, dict):
        raise error("request body must be a JSON object")
    return data


def create_api(sim: SimulatorApp | None = None, cors: bool = True) -> FastAPI:
    if sim is None:
        sim = SimulatorApp()
    app = FastAPI(
        title="Swap lifecycle simulator",
        version="0.1.0",
        description=(
            "Event-sourced post-trade simulator for fixed-vs-floating interest "
            "rate swaps: party registry, trade lifecycle, virtual clock, and "
            "read views, all behind one JSON API."
        ),
    )
    app.state.sim = sim

    if cors:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(DomainError)
    async def _domain_error(_request: Request, exc: DomainError) -> Response:
        body: dict[str, Any] = {"code": exc.code, "message": str(exc)}
        if exc.details:
            body["details"] = exc.details
        return canonical_response(body, exc.http_status)

    # -- simulation ---------------------------------------------------------

    @app.get("/health", summary="Liveness probe")
    async def health() -> Response:
        return canonical_response({"status": "ok"})

    @app.post("/simulation/reset", summary="Erase the simulation, keep parties")
    async def reset_simulation(request: Request) -> Response:
        body = await _json_body(request)
        seed = body.get("seed")
        if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
            raise InvalidCommand("seed must be an integer")
        active_seed = sim.reset_simulation(seed)
        return canonical_response({"seed": active_seed})

    # -- clock --------------------------------------------------------------

    def _clock_payload() -> dict:
        clock_id = sim.harness.clock_id()
        if clock_id is None:
            raise NoClock("no simulation clock exists yet")
        return {"clockId": clock_id, "currentTime": sim.harness.now().isoformat()}

    @app.post("/clock", status_code=201, summary="Create the simulation clock")
    async def create_clock(request: Request) -> Response:
        body = await _json_body(request)
        initial = body.get("initialTime")
        if not isinstance(initial, str):
            raise InvalidCommand("body must carry an initialTime ISO datetime string")
        try:
            moment = parse_datetime(initial, "initialTime")
        except ValueError as exc:
            raise InvalidCommand(str(exc)) from None
        sim.harness.create_clock(moment)
        return canonical_response(_clock_payload(), 201)

    @app.get("/clock", summary="Current simulation time")
    async def get_clock() -> Response:
        return canonical_response(_clock_payload())

    @app.post("/clock/advance", summary="Advance the clock to a given time")
    async def advance_clock(request: Request) -> Response:
        body = await _json_body(request)
        target = body.get("time")
        if not isinstance(target, str):
            raise InvalidCommand("body must carry a time ISO datetime string")
        try:
            moment = parse_datetime(target, "time")
        except ValueError as exc:
            raise InvalidCommand(str(exc)) from None
        report = sim.harness.advance_to(moment)
        return canonical_response(report.to_json())

    @app.post("/clock/forward", summary="Advance to the next open deadline")
    async def forward_clock() -> Response:
        report = sim.harness.advance_to_next_deadline()
        return canonical_response(report.to_json())

    @app.post("/clock/play", summary="Advance until no deadline remains open")
    async def play_clock() -> Response:
        report = sim.harness.play()
        return canonical_response(report.to_json())

    # -- parties ------------------------------------------------------------

    def _party_fields(body: dict) -> tuple[str, str]:
        name = body.get("name")
        lei = body.get("legalEntityId")
        if not isinstance(name, str) or not isinstance(lei, str):
            raise InvalidCommand("body must carry string fields name and legalEntityId")
        return name, lei

    @app.get("/parties", summary="List registered parties")
    async def list_parties() -> Response:
        return canonical_response([party_to_json(p) for p in sim.registry.list()])

    @app.post("/parties", status_code=201, summary="Register a party")
    async def create_party(request: Request) -> Response:
        name, lei = _party_fields(await _json_body(request))
        party = sim.registry.register(name, lei)
        return canonical_response(party_to_json(party), 201)

    @app.get("/parties/{party_id}", summary="Fetch one party")
    async def get_party(party_id: str) -> Response:
        return canonical_response(party_to_json(sim.registry.get(party_id)))

    @app.put("/parties/{party_id}", summary="Update a party")
    async def update_party(party_id: str, request: Request) -> Response:
        name, lei = _party_fields(await _json_body(request))
        party = sim.registry.update(party_id, name, lei)
        return canonical_response(party_to_json(party))

    @app.delete("/parties/{party_id}", status_code=204, summary="Remove a party")
    async def delete_party(party_id: str) -> Response:
        sim.registry.delete(party_id)
        return Response(status_code=204)

    # -- trades ---------------------------------------------------------------

    @app.post("/trades", status_code=201, summary="Submit a trade execution")
    async def submit_trade(request: Request) -> Response:
        body = await _json_body(request, error=InvalidTrade)
        try:
            trade = trade_from_json(body)
        except ValueError as exc:
            raise InvalidTrade(str(exc)) from None
        sim.fmi.submit_execution(trade)
        return canonical_response(sim.query.trade(trade.trade_id).to_json(), 201)

    @app.get("/trades", summary="Trade blotter")
    async def blotter() -> Response:
        return canonical_response([row.to_json() for row in sim.query.blotter()])

    @app.get("/trades/{trade_id}", summary="One blotter row")
    async def get_trade(trade_id: str) -> Response:
        return canonical_response(sim.query.trade(trade_id).to_json())

    @app.post("/trades/{trade_id}/consent", summary="Confirm or reject an execution")
    async def consent(trade_id: str, request: Request) -> Response:
        body = await _json_body(request)
        decision_raw = body.get("decision")
        if not isinstance(decision_raw, str):
            raise InvalidCommand("body must carry a decision of CONFIRM or REJECT")
        try:
            decision = ConsentDecision(decision_raw)
        except ValueError:
            raise InvalidCommand(
                f"decision {decision_raw!r} must be CONFIRM or REJECT"
            ) from None
        sim.fmi.consent(trade_id, decision)
        return canonical_response(sim.query.trade(trade_id).to_json())

    # -- read views -------------------------------------------------------------

    @app.get("/events", summary="Recent events, newest first")
    async def events(request: Request) -> Response:
        params = request.query_params
        limit_raw = params.get("limit", "25")
        try:
            limit = int(limit_raw)
        except ValueError:
            raise InvalidCommand(f"limit {limit_raw!r} must be an integer") from None
        if limit < 0:
            raise InvalidCommand("limit must be non-negative")
        cdm_raw = params.get("cdmOnly", "false").lower()
        if cdm_raw not in ("true", "false", "1", "0"):
            raise InvalidCommand("cdmOnly must be true or false")
        cdm_only = cdm_raw in ("true", "1")
        rows = sim.query.event_stream(limit=limit, cdm_only=cdm_only)
        return canonical_response([row.to_json() for row in rows])

    @app.get("/deadlines/next", summary="Earliest open deadline")
    async def next_deadline() -> Response:
        view = sim.query.next_deadline()
        if view is None:
            return canonical_response({"deadline": None})
        return canonical_response(view.to_json())

    return app
