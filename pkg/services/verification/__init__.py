# Verification services
from .verification_service import SUITES, VerificationService, class_number_oracle, verification_service

__all__ = ["SUITES", "VerificationService", "class_number_oracle", "verification_service"]
