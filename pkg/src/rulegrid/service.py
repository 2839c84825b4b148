"""HTTP service: definition CRUD for the editor, game lifecycle for players.

Protocol summary (JSON bodies everywhere):

    GET  /definitions                    -> {"definitions": [name, ...]}
    GET  /definitions/{name}             -> definition document
    PUT  /definitions/{name}             -> stores document (Bearer token)
    POST /games                          -> {"id", "seed", "game"}
    POST /games/{id}/join                -> {"player", "commands"}
    POST /games/{id}/events              -> {"fired", "commands"}
    GET  /games/{id}                     -> full state document + last_seq
    GET  /games/{id}/commands?since=N    -> {"commands", "last_seq"}
    POST /games/{id}/save                -> {"saved": path}
    POST /games/{id}/load                -> full state document + last_seq

Rejected moves answer 409 with {"code", "reason"} and broadcast nothing;
missing ids answer 404; editor calls without the right token answer 401.
Clients keep a faithful board copy by applying the command stream in seq
order, falling back to the full state document when they lose the thread.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Header, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .config import AppConfig
from .dsl import definition_doc
from .errors import AuthError, GameError, InvalidDefinition, NotFound, Rejected, error_code
from .model import Event, HUMAN
from .snapshots import command_doc, event_from_doc, game_doc, player_doc
from .store import GameStore


class CreateGameBody(BaseModel):
    definition: str
    seed: int | None = None


class JoinBody(BaseModel):
    name: str
    kind: str = HUMAN


class EventBody(BaseModel):
    kind: str
    actor: int | None = None
    coord: tuple[int, int] | None = None
    value: int | None = None


class DefinitionList(BaseModel):
    definitions: list[str]


class EventResult(BaseModel):
    fired: list[str]
    commands: list[dict]


class JoinResult(BaseModel):
    player: dict
    commands: list[dict]


class CreateGameResult(BaseModel):
    id: str
    seed: int
    game: dict


class CommandBatch(BaseModel):
    commands: list[dict]
    last_seq: int


class SaveResult(BaseModel):
    saved: str


class PutDefinitionResult(BaseModel):
    name: str
    diagnostics: list[dict] = Field(default_factory=list)


def _state_doc(store: GameStore, game_id: str) -> dict:
    rg = store.get_state(game_id)
    doc = game_doc(rg)
    doc["last_seq"] = rg.last_seq
    return doc


def create_app(config: AppConfig) -> FastAPI:
    config.check()
    store = GameStore(config.data_dir, config.editor_token)
    store.bootstrap()

    app = FastAPI(title="rulegrid", version="0.1.0")
    app.state.store = store
    app.state.config = config

    @app.exception_handler(Rejected)
    async def _rejected(_req: Request, exc: Rejected):
        return JSONResponse(status_code=409, content={"code": exc.code, "reason": exc.reason})

    @app.exception_handler(NotFound)
    async def _not_found(_req: Request, exc: NotFound):
        return JSONResponse(status_code=404, content={"code": "not_found", "reason": str(exc)})

    @app.exception_handler(AuthError)
    async def _auth(_req: Request, exc: AuthError):
        return JSONResponse(status_code=401, content={"code": "auth", "reason": str(exc)})

    @app.exception_handler(InvalidDefinition)
    async def _invalid_definition(_req: Request, exc: InvalidDefinition):
        return JSONResponse(
            status_code=422,
            content={"code": "invalid_definition",
                     "diagnostics": [d.as_dict() for d in exc.diagnostics]},
        )

    @app.get("/definitions", response_model=DefinitionList)
    def list_definitions():
        return DefinitionList(definitions=store.list_definitions())

    @app.get("/definitions/{name}")
    def get_definition(name: str):
        return definition_doc(store.get_definition(name))

    @app.put("/definitions/{name}", response_model=PutDefinitionResult)
    async def put_definition(name: str, request: Request,
                             authorization: str | None = Header(default=None)):
        token = None
        if authorization and authorization.lower().startswith("bearer "):
            token = authorization[7:]
        body = (await request.body()).decode("utf-8")
        store.put_definition(name, body, token)
        return PutDefinitionResult(name=name)

    @app.post("/games", response_model=CreateGameResult, status_code=201)
    def create_game(body: CreateGameBody):
        rg = store.create_game(body.definition, body.seed)
        return CreateGameResult(id=rg.id, seed=rg.rng_seed, game=_state_doc(store, rg.id))

    @app.post("/games/{game_id}/join", response_model=JoinResult)
    def join_game(game_id: str, body: JoinBody):
        try:
            rg, commands = store.join(game_id, body.name, body.kind)
        except (NotFound, Rejected):
            raise
        except GameError as exc:
            raise Rejected(error_code(exc), str(exc)) from exc
        return JoinResult(
            player=player_doc(rg.players[-1]),
            commands=[command_doc(c) for c in commands],
        )

    @app.post("/games/{game_id}/events", response_model=EventResult)
    def submit_event(game_id: str, body: EventBody):
        doc = {"kind": body.kind, "actor": body.actor, "value": body.value}
        if body.coord is not None:
            doc["coord"] = list(body.coord)
        event: Event = event_from_doc(doc)
        _, commands, fired = store.submit_event(game_id, body.actor, event)
        return EventResult(fired=fired, commands=[command_doc(c) for c in commands])

    @app.get("/games/{game_id}")
    def get_game(game_id: str):
        return _state_doc(store, game_id)

    @app.get("/games/{game_id}/commands", response_model=CommandBatch)
    def get_commands(game_id: str, since: int = 0):
        commands = store.commands_since(game_id, since)
        rg = store.get_state(game_id)
        return CommandBatch(
            commands=[command_doc(c) for c in commands],
            last_seq=rg.last_seq,
        )

    @app.post("/games/{game_id}/save", response_model=SaveResult)
    def save_game(game_id: str):
        path = store.persist_game(game_id)
        return SaveResult(saved=str(path))

    @app.post("/games/{game_id}/load")
    def load_game(game_id: str):
        store.load_game(game_id)
        return _state_doc(store, game_id)

    if config.frontend_dir and Path(config.frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.frontend_dir, html=True), name="ui")

    return app
