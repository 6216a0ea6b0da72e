# Unit tests for text2action.ui
