from app.services.mckay_service import McKayService
from app.services.pipeline import FoldingFixture, build_fixture

__all__ = ["McKayService", "FoldingFixture", "build_fixture"]
