"""HTTP API wrapping the correction pipeline."""
from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .labels import cap_from_string, punct_from_string
from .reconstruct import DEFAULT_POLICY, RenderPolicy, reconstruct
from .restore import correct_text
from .tagger import MODEL_SPECS, TaggerBackend
from .tokenizer import Token, Vocab
from .wire import ProtocolError


class CorrectRequest(BaseModel):
    text: str


class CorrectResponse(BaseModel):
    corrected: str


class PredictRequest(BaseModel):
    tokens: list[str] = Field(min_length=0)


class PredictResponse(BaseModel):
    punct: list[str]
    caps: list[str]


class ReconstructRequest(BaseModel):
    tokens: list[str]
    punct: list[str]
    caps: list[str]


class ModelInfo(BaseModel):
    name: str
    hidden_size: int
    attn_heads: int
    hidden_layers: int
    params_millions: float


def create_app(
    backend: TaggerBackend,
    vocab: Vocab,
    max_len: int = 512,
    policy: RenderPolicy = DEFAULT_POLICY,
) -> FastAPI:
    app = FastAPI(title="noktalama", version="0.1.0")

    def _tokens(surfaces: list[str]) -> list[Token]:
        tokens = []
        word_index = -1
        for s in surfaces:
            is_cont = s.startswith(vocab.continuation_prefix)
            if not is_cont or word_index < 0:
                word_index += 1
            tokens.append(Token(s, is_cont, vocab.id_of(s), word_index))
        return tokens

    @app.get("/health")
    def health():
        return {"status": "ok", "model": backend.model_name}

    @app.get("/models", response_model=list[ModelInfo])
    def models():
        return [ModelInfo(**vars(spec)) for spec in MODEL_SPECS.values()]

    @app.post("/correct", response_model=CorrectResponse)
    def correct(request: CorrectRequest):
        try:
            corrected = correct_text(request.text, backend, vocab, max_len, policy)
        except ProtocolError as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from None
        return CorrectResponse(corrected=corrected)

    @app.post("/predict", response_model=PredictResponse)
    def predict(request: PredictRequest):
        tokens = _tokens(request.tokens)
        if len(tokens) > max_len:
            raise HTTPException(status_code=422, detail="token sequence exceeds max_len")
        try:
            punct, caps = backend.predict(tokens)
        except ProtocolError as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from None
        return PredictResponse(punct=[p.value for p in punct], caps=[c.value for c in caps])

    @app.post("/reconstruct", response_model=CorrectResponse)
    def reconstruct_endpoint(request: ReconstructRequest):
        if not (len(request.tokens) == len(request.punct) == len(request.caps)):
            raise HTTPException(status_code=422, detail="parallel rows differ in length")
        try:
            punct = [punct_from_string(v) for v in request.punct]
            caps = [cap_from_string(v) for v in request.caps]
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        text = reconstruct(_tokens(request.tokens), punct, caps, policy)
        return CorrectResponse(corrected=text)

    return app
