"""Stateless JSON-over-HTTP prediction service.

Endpoints: POST /predict, POST /curve, GET /presets, GET /health. Handlers
are pure over a read-only preset registry loaded before serving; identical
requests always produce identical responses.
"""

from __future__ import annotations

from typing import Optional, Union

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field, field_validator

from . import api
from .errors import PresetError
from .plotting import density_curve
from .presets import list_presets
from .skew_normal import InvalidShapeError, SkewNormalShape


class PredictBody(BaseModel):
    size_mm: float
    margin_mm: float
    edge: str
    preset: Union[str, dict]
    curve_points: Optional[int] = None

    @field_validator("size_mm")
    @classmethod
    def _size_positive(cls, v):
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @field_validator("margin_mm")
    @classmethod
    def _margin_nonnegative(cls, v):
        if v < 0:
            raise ValueError("must be >= 0")
        return v

    @field_validator("edge")
    @classmethod
    def _edge_known(cls, v):
        if v.strip().lower() not in api.VALID_EDGES:
            raise ValueError(f"must be one of {', '.join(api.VALID_EDGES)}")
        return v

    @field_validator("curve_points")
    @classmethod
    def _points_enough(cls, v):
        if v is not None and v < 2:
            raise ValueError("must be >= 2")
        return v


class ShapeBody(BaseModel):
    xi: float
    omega: float = Field(gt=0)
    alpha: float


class CurveBody(BaseModel):
    shape: ShapeBody
    points: int = Field(default=201, ge=2)


def create_app(preset_dir=None) -> FastAPI:
    app = FastAPI(title="edgetap", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def _validation_to_400(request: Request, exc: RequestValidationError):
        errors = [
            {"field": ".".join(str(p) for p in err["loc"] if p != "body"), "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"errors": errors})

    @app.get("/health")
    async def health():
        return PlainTextResponse("ok")

    @app.get("/presets")
    async def presets():
        return {
            "presets": [
                {
                    "name": p.name,
                    "device": p.device,
                    "edge": p.edge,
                    "axis": p.axis,
                    "units": p.units,
                    "spec_version": p.spec_version,
                }
                for p in list_presets(preset_dir)
            ]
        }

    @app.post("/predict")
    async def predict(body: PredictBody):
        try:
            preset = api.resolve_preset(body.preset, preset_dir=preset_dir)
        except PresetError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return api.build_predict_response(
            preset, body.size_mm, body.margin_mm, body.edge, curve_points=body.curve_points
        )

    @app.post("/curve")
    async def curve(body: CurveBody):
        try:
            shape = SkewNormalShape(xi=body.shape.xi, omega=body.shape.omega, alpha=body.shape.alpha)
        except InvalidShapeError as exc:
            return JSONResponse(status_code=400, content={"errors": [{"field": "shape", "message": str(exc)}]})
        return {"curve": [[x, y] for x, y in density_curve(shape, points=body.points)]}

    return app
