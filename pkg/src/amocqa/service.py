"""HTTP API: question translation, program execution, and combined QA.

Translation defaults to the deterministic reference translator. When a
model adapter is configured (QAPT_MODEL_URL, or an injected predictor), the
"model" engine forwards masked token sequences to it and validates whatever
comes back, falling back to the reference translator with a warning unless
the request disables fallback. All handlers are stateless; shared state
(constants, the form registry) is immutable after startup.
"""

from __future__ import annotations

import os
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import boxmodel, dsl, executor, qforms, textcodec

MAX_SERIES_POINTS = 2000


class AdapterUnreachable(Exception):
    """The model adapter could not be reached."""


class ModelOutputInvalid(Exception):
    """The model adapter answered, but not with a usable program."""


class TranslateRequest(BaseModel):
    question: str = Field(min_length=1)
    engine: Literal["reference", "model"] = "reference"
    fallback: bool = True


class ExecuteRequest(BaseModel):
    program: str = Field(min_length=1)


def downsample_indices(length: int, limit: int = MAX_SERIES_POINTS) -> list[int]:
    """Pick at most ``limit`` indices of range(length), keeping both ends."""
    if length <= limit:
        return list(range(length))
    step = (length - 1) / (limit - 1)
    picked = {round(i * step) for i in range(limit)}
    picked.add(0)
    picked.add(length - 1)
    return sorted(picked)


def _mask_tokens(text: str) -> tuple[list[str], list[str]]:
    tokens = []
    values = []
    for token in textcodec.tokenize(text):
        if textcodec.is_numeral(token):
            tokens.append("VALUE")
            values.append(token)
        else:
            tokens.append(token)
    return tokens, values


def _unmask_program(tokens, values) -> str:
    out = []
    remaining = list(values)
    for token in tokens:
        if token == "VALUE":
            if not remaining:
                raise ModelOutputInvalid("more VALUE tokens than stored literals")
            out.append(remaining.pop(0))
        else:
            out.append(token)
    return "".join(out)


def _http_predictor(model_url: str):
    import httpx

    endpoint = model_url.rstrip("/") + "/predict"

    def predict(direction: str, tokens, values):
        try:
            response = httpx.post(
                endpoint,
                json={"direction": direction, "tokens": tokens, "values": values},
                timeout=30.0,
            )
            response.raise_for_status()
            data = response.json()
        except httpx.HTTPError as exc:
            raise AdapterUnreachable(str(exc)) from exc
        try:
            return list(data["tokens"]), [str(v) for v in data.get("values", [])]
        except (KeyError, TypeError) as exc:
            raise ModelOutputInvalid(f"bad adapter payload: {exc}") from exc

    return predict


def _reference_translation(question: str) -> dict:
    result = qforms.match_question(question)
    return {
        "program": dsl.print_program(result.program),
        "source": "reference",
        "form_id": result.form_id,
        "warnings": [],
    }


def create_app(
    constants: boxmodel.Constants = boxmodel.DEFAULT_CONSTANTS,
    model_url: str | None = None,
    predictor=None,
) -> FastAPI:
    """Build the application; predictor overrides the HTTP model adapter."""
    if model_url is None:
        model_url = os.environ.get("QAPT_MODEL_URL")
    if predictor is None and model_url:
        predictor = _http_predictor(model_url)

    app = FastAPI(title="Box-model question answering")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    def translate(body: TranslateRequest) -> dict:
        if body.engine == "reference":
            return _reference_translation(body.question)
        try:
            if predictor is None:
                raise AdapterUnreachable("no model adapter configured")
            tokens, values = _mask_tokens(body.question)
            out_tokens, out_values = predictor("QTP", tokens, values)
            program_text = _unmask_program(out_tokens, out_values)
            prog = dsl.parse(program_text)
            return {
                "program": dsl.print_program(prog),
                "source": "model",
                "form_id": None,
                "warnings": [],
            }
        except (
            AdapterUnreachable,
            ModelOutputInvalid,
            dsl.ProgramSyntaxError,
            dsl.ValidationError,
        ) as exc:
            if not body.fallback:
                status = 502 if isinstance(exc, AdapterUnreachable) else 422
                raise _http_error(status, f"model translation failed: {exc}")
            result = _reference_translation(body.question)
            result["warnings"] = [
                f"model translation failed ({exc}); fell back to reference"
            ]
            return result

    def _http_error(status: int, detail):
        from fastapi import HTTPException

        return HTTPException(status_code=status, detail=detail)

    def execute_program(program_text: str) -> dict:
        try:
            prog = dsl.parse(program_text)
        except dsl.ProgramSyntaxError as exc:
            raise _http_error(
                422,
                {
                    "message": "syntax error",
                    "position": exc.position,
                    "expected": exc.expected,
                    "found": exc.found,
                },
            )
        except dsl.ValidationError as exc:
            raise _http_error(422, {"message": f"invalid program: {exc}"})
        try:
            answer, out = executor.run_program(prog, constants)
        except boxmodel.InvalidParams as exc:
            raise _http_error(422, {"message": str(exc)})
        except boxmodel.NumericalBlowup as exc:
            raise _http_error(500, {"message": str(exc)})
        series = out.series(prog.variable)
        indices = downsample_indices(len(series))
        payload = {
            "program": dsl.print_program(prog),
            "answer": answer.to_dict(),
            "warnings": list(answer.warnings),
            "series": {
                "steps": indices,
                "variable": prog.variable,
                "values": [series[i] for i in indices],
                "M_n": [out.M_n[i] for i in indices],
            },
            "params_used": {
                "Fwn": out.params.Fwn,
                "Fws": out.params.Fws,
                "M_ek": out.params.M_ek,
                "D_low0": out.params.D_low0,
                "epsilon": out.params.epsilon,
                "N": out.params.N,
                "dt": out.params.dt,
            },
        }
        return payload

    @app.post("/api/translate")
    def handle_translate(body: TranslateRequest):
        try:
            return translate(body)
        except qforms.NoMatch as exc:
            raise _http_error(422, {"message": f"no question form matches: {exc}"})

    @app.post("/api/execute")
    def handle_execute(body: ExecuteRequest):
        return execute_program(body.program)

    @app.post("/api/qa")
    def handle_qa(body: TranslateRequest):
        try:
            translation = translate(body)
        except qforms.NoMatch as exc:
            raise _http_error(422, {"message": f"no question form matches: {exc}"})
        payload = execute_program(translation["program"])
        payload["source"] = translation["source"]
        payload["form_id"] = translation["form_id"]
        payload["warnings"] = translation["warnings"] + payload["warnings"]
        return payload

    @app.get("/api/forms")
    def handle_forms():
        return qforms.registry_json()

    @app.get("/healthz")
    def handle_health():
        return {"status": "ok"}

    return app


app = create_app()
